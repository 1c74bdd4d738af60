#include "cantor/tower.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace cantor {

namespace {

using nlohmann::json;

Int int_from_json(const json& j) {
  if (j.is_string()) return Int(j.get<std::string>());
  if (j.is_number_integer()) return Int(j.get<long>());
  throw Error("expected integer or integer string in spec");
}

json int_to_json(const Int& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

IntMat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error("matrix must be a nonempty array of rows");
  int rows = int(j.size());
  int cols = int(j[0].size());
  if (cols == 0) throw Error("matrix rows must be nonempty");
  IntMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[size_t(i)].is_array() || int(j[size_t(i)].size()) != cols)
      throw Error("ragged matrix in spec");
    for (int c = 0; c < cols; ++c) m(i, c) = int_from_json(j[size_t(i)][size_t(c)]);
  }
  return m;
}

json mat_to_json(const IntMat& m) {
  json j = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(int_to_json(m(i, c)));
    j.push_back(std::move(row));
  }
  return j;
}

std::string angle_to_string(const FieldElement& x) {
  if (x.is_rational()) return to_string(x.as_rat());
  std::ostringstream os;
  os << "coords:[";
  for (size_t i = 0; i < x.coords().size(); ++i) {
    if (i) os << ",";
    os << to_string(x.coords()[i]);
  }
  os << "]@" << poly_to_string(x.field()->minpoly());
  return os.str();
}

}  // namespace

DiagramSpec DiagramSpec::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(std::string("spec parse: ") + e.what());
  }
  DiagramSpec s;
  std::string kind = j.value("kind", std::string("stationary"));
  if (kind == "stationary") {
    s.kind = Kind::Stationary;
    if (!j.contains("matrix")) throw Error("stationary spec needs \"matrix\"");
    s.matrix = mat_from_json(j.at("matrix"));
  } else if (kind == "explicit") {
    s.kind = Kind::Explicit;
    if (!j.contains("matrices")) throw Error("explicit spec needs \"matrices\"");
    for (const auto& mj : j.at("matrices")) s.matrices.push_back(mat_from_json(mj));
    if (s.matrices.empty()) throw Error("explicit spec needs at least one matrix");
  } else if (kind == "sturmian") {
    s.kind = Kind::Sturmian;
    if (!j.contains("cf")) throw Error("sturmian spec needs \"cf\"");
    for (const auto& e : j.at("cf")) s.cf.push_back(int_from_json(e));
    if (s.cf.empty()) throw Error("sturmian block must be nonempty");
  } else if (kind == "odometer") {
    s.kind = Kind::Odometer;
    if (!j.contains("bases")) throw Error("odometer spec needs \"bases\"");
    for (const auto& e : j.at("bases")) s.bases.push_back(int_from_json(e));
    if (s.bases.empty()) throw Error("odometer base list must be nonempty");
  } else {
    throw Error("unknown spec kind: " + kind);
  }
  if (j.contains("orders")) {
    for (const auto& oj : j.at("orders")) {
      VershikOrder o;
      o.level = oj.at("level").get<int>();
      o.vertex = oj.at("vertex").get<int>();
      for (const auto& e : oj.at("sources")) o.sources.push_back(e.get<int>());
      s.orders.push_back(std::move(o));
    }
  }
  if (j.contains("declared_angle"))
    s.declared_angle = parse_real(j.at("declared_angle").get<std::string>());
  s.name = j.value("name", std::string());
  return s;
}

std::string DiagramSpec::to_json_text() const {
  json j;
  switch (kind) {
    case Kind::Stationary:
      j["kind"] = "stationary";
      j["matrix"] = mat_to_json(matrix);
      break;
    case Kind::Explicit: {
      j["kind"] = "explicit";
      json arr = json::array();
      for (const auto& m : matrices) arr.push_back(mat_to_json(m));
      j["matrices"] = std::move(arr);
      break;
    }
    case Kind::Sturmian: {
      j["kind"] = "sturmian";
      json arr = json::array();
      for (const auto& e : cf) arr.push_back(int_to_json(e));
      j["cf"] = std::move(arr);
      break;
    }
    case Kind::Odometer: {
      j["kind"] = "odometer";
      json arr = json::array();
      for (const auto& e : bases) arr.push_back(int_to_json(e));
      j["bases"] = std::move(arr);
      break;
    }
  }
  if (!orders.empty()) {
    json arr = json::array();
    for (const auto& o : orders) {
      json oj;
      oj["level"] = o.level;
      oj["vertex"] = o.vertex;
      oj["sources"] = o.sources;
      arr.push_back(std::move(oj));
    }
    j["orders"] = std::move(arr);
  }
  if (declared_angle) j["declared_angle"] = angle_to_string(*declared_angle);
  if (!name.empty()) j["name"] = name;
  return j.dump();
}

DiagramSpec sturmian_spec(const std::vector<Int>& cf) {
  if (cf.empty()) throw Error("sturmian block must be nonempty");
  for (const auto& a : cf)
    if (a < 1) throw Error("sturmian partial quotients must be >= 1");
  DiagramSpec s;
  s.cf = cf;
  if (cf.size() == 1) {
    s.kind = DiagramSpec::Kind::Stationary;
    s.matrix = IntMat(2, 2, {cf[0], Int(1), Int(1), Int(0)});
  } else {
    s.kind = DiagramSpec::Kind::Sturmian;
  }
  // Angle with purely periodic continued fraction [0; a_1, ..., a_p, ...]:
  // fixed point of the Moebius maps y -> 1/(a_i + y) composed over the block.
  IntMat f = IntMat::identity(2);
  for (const auto& a : cf) f = f * IntMat(2, 2, {Int(0), Int(1), Int(1), a});
  // c x^2 + (d - a) x - b = 0; the block has positive entries, so the root
  // in (0, 1) is the one with the + branch of the square root.
  Int qa = f(0, 0), qb = f(0, 1), qc = f(1, 0), qd = f(1, 1);
  Int disc = (qd - qa) * (qd - qa) + 4 * qb * qc;
  auto [sq, rest] = squarefree_decompose(disc);
  if (rest == 1) throw Error("sturmian block produced a rational angle");
  FieldPtr fld = NumberField::sqrt_field(rest);
  std::vector<Rat> coords{make_rat(qa - qd, 2 * qc), make_rat(sq, 2 * qc)};
  s.declared_angle = FieldElement(fld, std::move(coords));
  std::ostringstream nm;
  nm << "sturmian-cf:";
  for (size_t i = 0; i < cf.size(); ++i) nm << (i ? "," : "") << cf[i].get_str();
  s.name = nm.str();
  return s;
}

DiagramSpec odometer_spec(const std::vector<Int>& bases) {
  if (bases.empty()) throw Error("odometer base list must be nonempty");
  for (const auto& b : bases)
    if (b < 2) throw Error("odometer bases must be >= 2");
  DiagramSpec s;
  s.kind = DiagramSpec::Kind::Odometer;
  s.bases = bases;
  std::ostringstream nm;
  nm << "odometer:";
  for (size_t i = 0; i < bases.size(); ++i) nm << (i ? "," : "") << bases[i].get_str();
  s.name = nm.str();
  return s;
}

struct Tower::Data {
  DiagramSpec spec;
  BuildOptions opts;
  int levels = 0;
  std::vector<IntMat> matrices;                         // [n-1] = M_n
  std::vector<std::vector<Int>> heights;                // [n-1] = H_n
  std::vector<std::vector<std::vector<int>>> orders;    // [n-2][l-1], n >= 2
  CompositionRecord comp;
  std::vector<int> consumed;  // raw matrices consumed through level n, [n-2]
  Continuation cont = Continuation::None;
  int cycle_len = 1;

  mutable std::mutex cache_mu;
  mutable std::map<std::pair<int, int>, IntMat> prod_cache;
};

namespace {

// Raw supply: matrix feeding built level construction, index 0 = the
// matrix between levels 1 and 2.
struct RawSupply {
  const DiagramSpec& spec;

  bool cyclic() const { return spec.kind != DiagramSpec::Kind::Explicit; }
  int count() const {
    switch (spec.kind) {
      case DiagramSpec::Kind::Explicit: return int(spec.matrices.size());
      case DiagramSpec::Kind::Stationary: return 1;
      case DiagramSpec::Kind::Sturmian: return int(spec.cf.size());
      case DiagramSpec::Kind::Odometer: return int(spec.bases.size());
    }
    return 0;
  }
  IntMat at(long idx) const {
    switch (spec.kind) {
      case DiagramSpec::Kind::Stationary:
        return spec.matrix;
      case DiagramSpec::Kind::Explicit:
        return spec.matrices[size_t(idx)];
      case DiagramSpec::Kind::Sturmian: {
        const Int& a = spec.cf[size_t(idx % long(spec.cf.size()))];
        return IntMat(2, 2, {a, Int(1), Int(1), Int(0)});
      }
      case DiagramSpec::Kind::Odometer:
        return IntMat(1, 1, {spec.bases[size_t(idx % long(spec.bases.size()))]});
    }
    throw Error("unreachable");
  }
};

std::vector<int> default_order_row(const IntMat& m, int vertex) {
  std::vector<int> out;
  for (int k = 0; k < m.cols(); ++k) {
    if (m(vertex - 1, k) < 0) throw Error("negative multiplicity in level matrix");
    for (Int c = 0; c < m(vertex - 1, k); ++c) out.push_back(k + 1);
  }
  return out;
}

void validate_matrix_shape(const IntMat& m, const char* what) {
  if (m.rows() < 1 || m.cols() < 1) throw Error(std::string(what) + ": empty matrix");
  for (int i = 0; i < m.rows(); ++i) {
    bool any = false;
    for (int j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0) throw Error(std::string(what) + ": negative entry");
      if (m(i, j) > 0) any = true;
    }
    if (!any) throw Error(std::string(what) + ": zero row");
  }
  for (int j = 0; j < m.cols(); ++j) {
    bool any = false;
    for (int i = 0; i < m.rows(); ++i)
      if (m(i, j) > 0) any = true;
    if (!any) throw Error(std::string(what) + ": zero column");
  }
}

// Raw orders for raw level rl (>= 2): defaults from the matrix row,
// overridden by spec orders for that raw level.
std::vector<std::vector<int>> raw_orders_at(const DiagramSpec& spec, const IntMat& raw, int rl) {
  std::vector<std::vector<int>> out;
  out.reserve(size_t(raw.rows()));
  for (int l = 1; l <= raw.rows(); ++l) out.push_back(default_order_row(raw, l));
  for (const auto& o : spec.orders) {
    if (o.level != rl) continue;
    if (o.vertex < 1 || o.vertex > raw.rows())
      throw Error("order override vertex out of range");
    auto want = out[size_t(o.vertex - 1)];
    auto got = o.sources;
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    if (want != got)
      throw Error("order override is not a rearrangement of the incidence row");
    out[size_t(o.vertex - 1)] = o.sources;
  }
  return out;
}

}  // namespace

Tower Tower::build(const DiagramSpec& spec, int levels, const BuildOptions& opts) {
  if (levels < 1) throw Error("tower needs at least one level");
  if (opts.composition_bound < 1) throw Error("composition bound must be >= 1");
  switch (spec.kind) {
    case DiagramSpec::Kind::Stationary:
      if (spec.matrix.rows() != spec.matrix.cols())
        throw Error("stationary level matrix must be square");
      validate_matrix_shape(spec.matrix, "stationary matrix");
      break;
    case DiagramSpec::Kind::Explicit:
      if (spec.matrices.empty()) throw Error("explicit spec needs at least one matrix");
      for (size_t i = 0; i < spec.matrices.size(); ++i) {
        validate_matrix_shape(spec.matrices[i], "level matrix");
        if (i > 0 && spec.matrices[i].cols() != spec.matrices[i - 1].rows())
          throw Error("level matrix shapes do not chain");
      }
      break;
    case DiagramSpec::Kind::Sturmian:
      if (spec.cf.empty()) throw Error("sturmian block must be nonempty");
      for (const auto& a : spec.cf)
        if (a < 1) throw Error("sturmian partial quotients must be >= 1");
      break;
    case DiagramSpec::Kind::Odometer:
      if (spec.bases.empty()) throw Error("odometer base list must be nonempty");
      for (const auto& b : spec.bases)
        if (b < 2) throw Error("odometer bases must be >= 2");
      break;
  }

  auto d = std::make_shared<Data>();
  d->spec = spec;
  d->opts = opts;
  RawSupply raw{d->spec};

  int c1 = raw.at(0).cols();
  d->matrices.push_back(IntMat(c1, 1, std::vector<Int>(size_t(c1), Int(1))));
  d->heights.push_back(std::vector<Int>(size_t(c1), Int(1)));
  d->levels = 1;

  long pos = 0;  // next raw index
  while (d->levels < levels) {
    if (!raw.cyclic() && pos >= raw.count()) break;
    IntMat acc = raw.at(pos);
    auto ords = raw_orders_at(d->spec, acc, int(pos) + 2);
    int w = 1;
    while (!is_positive(acc)) {
      if (w >= opts.composition_bound)
        throw Error("no strictly positive level matrix within the composition window");
      if (!raw.cyclic() && pos + w >= raw.count()) break;
      IntMat up = raw.at(pos + w);
      if (up.cols() != acc.rows()) throw Error("level matrix shapes do not chain");
      auto up_ords = raw_orders_at(d->spec, up, int(pos + w) + 2);
      // Compose: each visit of a source vertex expands to that vertex's
      // own visit order one level down.
      std::vector<std::vector<int>> comp_ords;
      comp_ords.reserve(up_ords.size());
      for (const auto& row : up_ords) {
        std::vector<int> flat;
        for (int e : row)
          for (int s : ords[size_t(e - 1)]) flat.push_back(s);
        comp_ords.push_back(std::move(flat));
      }
      acc = up * acc;
      ords = std::move(comp_ords);
      ++w;
    }
    if (!is_positive(acc)) {
      if (!raw.cyclic()) break;  // supply exhausted mid-window
      throw Error("no strictly positive level matrix within the composition window");
    }
    pos += w;
    d->comp.window.push_back(w);
    d->consumed.push_back(int(pos % std::max(1, raw.count())));
    d->heights.push_back(acc.mul_vec(d->heights.back()));
    d->matrices.push_back(std::move(acc));
    d->orders.push_back(std::move(ords));
    d->levels += 1;
  }

  switch (d->spec.kind) {
    case DiagramSpec::Kind::Explicit:
      d->cont = Continuation::None;
      d->cycle_len = 1;
      break;
    case DiagramSpec::Kind::Stationary:
      d->cont = Continuation::RepeatMatrix;
      d->cycle_len = 1;
      break;
    case DiagramSpec::Kind::Sturmian:
      d->cont = Continuation::CycleMatrices;
      d->cycle_len = int(spec.cf.size());
      break;
    case DiagramSpec::Kind::Odometer:
      d->cont = Continuation::CycleMatrices;
      d->cycle_len = int(spec.bases.size());
      break;
  }

  Tower t;
  t.d_ = std::move(d);
  return t;
}

int Tower::levels() const { return d_->levels; }

int Tower::C(int n) const {
  if (n < 1 || n > d_->levels) throw Error("level out of range");
  return d_->matrices[size_t(n - 1)].rows();
}

const IntMat& Tower::matrix(int n) const {
  if (n < 1 || n > d_->levels) throw Error("level out of range");
  return d_->matrices[size_t(n - 1)];
}

const std::vector<Int>& Tower::heights(int n) const {
  if (n < 1 || n > d_->levels) throw Error("level out of range");
  return d_->heights[size_t(n - 1)];
}

IntMat Tower::product(int n, int m) const {
  if (!(1 <= m && m < n && n <= d_->levels)) throw Error("product levels out of range");
  {
    std::lock_guard<std::mutex> lock(d_->cache_mu);
    auto it = d_->prod_cache.find({n, m});
    if (it != d_->prod_cache.end()) return it->second;
  }
  IntMat p = d_->matrices[size_t(m)];  // M_{m+1}
  for (int k = m + 2; k <= n; ++k) p = d_->matrices[size_t(k - 1)] * p;
  std::lock_guard<std::mutex> lock(d_->cache_mu);
  auto [it, ok] = d_->prod_cache.emplace(std::make_pair(n, m), std::move(p));
  (void)ok;
  return it->second;
}

const std::vector<int>& Tower::order(int n, int l) const {
  if (n < 2 || n > d_->levels) throw Error("order level out of range");
  const auto& per = d_->orders[size_t(n - 2)];
  if (l < 1 || l > int(per.size())) throw Error("order vertex out of range");
  return per[size_t(l - 1)];
}

SuffixSet Tower::suffix_set(int n) const {
  if (n < 1 || n + 1 > d_->levels) throw Error("suffix level out of range");
  SuffixSet out;
  out.level = n;
  int cn = C(n);
  int cn1 = C(n + 1);
  out.per_vertex.resize(size_t(cn1));
  for (int l = 1; l <= cn1; ++l) {
    const auto& ord = order(n + 1, l);
    std::vector<Int> tail(size_t(cn), Int(0));
    for (int s : ord) tail[size_t(s - 1)] += 1;
    auto& dst = out.per_vertex[size_t(l - 1)];
    auto push_unique = [&dst](const std::vector<Int>& v) {
      if (std::find(dst.begin(), dst.end(), v) == dst.end()) dst.push_back(v);
    };
    push_unique(tail);
    for (int s : ord) {
      tail[size_t(s - 1)] -= 1;
      push_unique(tail);
    }
  }
  return out;
}

Tower Tower::telescope(const std::vector<int>& cuts) const {
  if (cuts.empty() || cuts.front() != 1) throw Error("telescope cuts must start at level 1");
  for (size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i] <= cuts[i - 1]) throw Error("telescope cuts must increase");
  if (cuts.back() > d_->levels) throw Error("telescope cut beyond built depth");

  auto nd = std::make_shared<Data>();
  nd->spec.kind = DiagramSpec::Kind::Explicit;
  nd->spec.declared_angle = d_->spec.declared_angle;
  nd->spec.name = d_->spec.name.empty() ? std::string() : d_->spec.name + ":telescoped";
  nd->opts = d_->opts;
  nd->cont = Continuation::None;
  nd->cycle_len = 1;

  int c1 = C(1);
  nd->matrices.push_back(IntMat(c1, 1, std::vector<Int>(size_t(c1), Int(1))));
  nd->heights.push_back(d_->heights[0]);
  nd->levels = 1;
  for (size_t j = 1; j < cuts.size(); ++j) {
    int lo = cuts[j - 1], hi = cuts[j];
    IntMat m = product(hi, lo);
    nd->spec.matrices.push_back(m);
    // Orders compose by expanding each visited vertex one level at a time.
    std::vector<std::vector<int>> ords;
    for (int l = 1; l <= C(hi); ++l) ords.push_back(order(hi, l));
    for (int s = hi - 1; s > lo; --s) {
      std::vector<std::vector<int>> next;
      next.reserve(ords.size());
      for (const auto& row : ords) {
        std::vector<int> flat;
        for (int e : row)
          for (int x : order(s, e)) flat.push_back(x);
        next.push_back(std::move(flat));
      }
      ords = std::move(next);
    }
    nd->comp.window.push_back(hi - lo);
    nd->consumed.push_back(0);
    nd->heights.push_back(d_->heights[size_t(hi - 1)]);
    nd->matrices.push_back(std::move(m));
    nd->orders.push_back(std::move(ords));
    nd->levels += 1;
  }
  Tower t;
  t.d_ = std::move(nd);
  return t;
}

std::optional<IntMat> Tower::stationary_matrix() const {
  if (d_->cont != Continuation::RepeatMatrix || d_->levels < 2) return std::nullopt;
  return d_->matrices[1];
}

bool Tower::is_scalar() const {
  for (int n = 1; n <= d_->levels; ++n)
    if (C(n) != 1) return false;
  if (d_->cont == Continuation::None) return true;
  // Cyclic raw supplies keep the ambient sizes; sturmian stays 2-wide,
  // odometers stay 1-wide, stationary repeats the built matrix.
  return C(d_->levels) == 1;
}

Tower::Continuation Tower::continuation() const { return d_->cont; }

bool Tower::uniform_orders() const {
  return d_->cont == Continuation::RepeatMatrix && d_->spec.orders.empty() &&
         d_->levels >= 2;
}

int Tower::continuation_state(int n) const {
  if (d_->cont == Continuation::None) throw Error("tower has no known continuation");
  if (n < 1 || n > d_->levels) throw Error("level out of range");
  if (n == 1) return 0;
  return d_->consumed[size_t(n - 2)] % d_->cycle_len;
}

std::pair<IntMat, int> Tower::continuation_next(int state) const {
  if (d_->cont == Continuation::None) throw Error("tower has no known continuation");
  if (state < 0 || state >= d_->cycle_len) throw Error("continuation state out of range");
  RawSupply raw{d_->spec};
  IntMat acc = raw.at(state);
  int w = 1;
  while (!is_positive(acc)) {
    if (w >= d_->opts.composition_bound)
      throw Error("no strictly positive level matrix within the composition window");
    IntMat up = raw.at((state + w) % d_->cycle_len);
    acc = up * acc;
    ++w;
  }
  return {std::move(acc), (state + w) % d_->cycle_len};
}

const CompositionRecord& Tower::composition() const { return d_->comp; }
const std::optional<FieldElement>& Tower::declared_angle() const {
  return d_->spec.declared_angle;
}
const std::string& Tower::name() const { return d_->spec.name; }

Int Tower::entrance_time(const TowerPath& path) const {
  int n = path.level;
  if (n < 1 || n > d_->levels) throw Error("path level out of range");
  if (path.top_vertex < 1 || path.top_vertex > C(n)) throw Error("path vertex out of range");
  if (int(path.positions.size()) != n - 1) throw Error("path position count mismatch");

  // Vertex chain downward: v[k] is the path's vertex at level k.
  std::vector<int> v(size_t(n) + 1);
  v[size_t(n)] = path.top_vertex;
  for (int k = n - 1; k >= 1; --k) {
    const auto& ord = order(k + 1, v[size_t(k + 1)]);
    int p = path.positions[size_t(k - 1)];
    if (p < 1 || p > int(ord.size())) throw Error("path position out of range");
    v[size_t(k)] = ord[size_t(p - 1)];
  }

  Int r = 0;
  bool at_start = true;
  for (int k = 1; k <= n - 1; ++k) {
    const auto& ord = order(k + 1, v[size_t(k + 1)]);
    int p = path.positions[size_t(k - 1)];
    int from = p;  // tail starts after position p
    if (at_start) {
      if (p == 1) {
        at_start = true;
        continue;  // contributes nothing, still at the start
      }
      from = p - 1;  // first entry counts the sub-column the point starts
      at_start = false;
    }
    const auto& h = d_->heights[size_t(k - 1)];
    for (size_t i = size_t(from); i < ord.size(); ++i) r += h[size_t(ord[i] - 1)];
  }
  return r;
}

std::vector<TowerPath> enumerate_paths(const Tower& t, int level) {
  if (level < 1 || level > t.levels()) throw Error("level out of range");
  std::vector<TowerPath> out;
  std::vector<int> pos(size_t(level - 1));
  // positions[k-1] varies fastest for small k: recurse from the top level
  // down, emitting at the bottom.
  std::function<void(int, int)> descend = [&](int k, int vertex) {
    if (k == 1) {
      TowerPath p;
      p.level = level;
      p.top_vertex = 0;  // set by the caller loop
      p.positions = pos;
      out.push_back(std::move(p));
      return;
    }
    const auto& ord = t.order(k, vertex);
    for (int p = 1; p <= int(ord.size()); ++p) {
      pos[size_t(k - 2)] = p;
      descend(k - 1, ord[size_t(p - 1)]);
    }
  };
  for (int top = 1; top <= t.C(level); ++top) {
    size_t begin = out.size();
    descend(level, top);
    for (size_t i = begin; i < out.size(); ++i) out[i].top_vertex = top;
  }
  return out;
}

}  // namespace cantor
