#include "cantor/catalog.hpp"

#include <cctype>
#include <sstream>

namespace cantor {

namespace {

std::vector<Int> parse_int_list(const std::string& s, const char* what) {
  std::vector<Int> out;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    size_t b = piece.find_first_not_of(" \t");
    size_t e = piece.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(std::string(what) + ": empty list entry");
    piece = piece.substr(b, e - b + 1);
    for (char ch : piece)
      if (!std::isdigit(static_cast<unsigned char>(ch)))
        throw Error(std::string(what) + ": bad integer '" + piece + "'");
    out.push_back(Int(piece));
  }
  if (out.empty()) throw Error(std::string(what) + ": empty list");
  return out;
}

FieldElement golden_angle() {
  // (-1 + sqrt(5)) / 2, the rotation number of the golden sturmian system.
  FieldPtr f = NumberField::sqrt_field(Int(5));
  return FieldElement(f, {Rat(-1, 2), Rat(1, 2)});
}

}  // namespace

std::vector<CatalogEntry> catalog_entries() {
  return {
      {"fibonacci", true, "golden-ratio sturmian system (continued fraction 1,1,1,...)"},
      {"sturmian-cf:<a1,a2,...>", true,
       "sturmian system with the given repeated continued-fraction block"},
      {"odometer<d>", true, "base-d odometer; odometer:<b1,b2,...> cycles the bases"},
      {"inf-demo", true, "stationary [[3,1],[1,3]] system with nontrivial infinitesimals"},
      {"sec42", false,
       "group data, level k: image approximant (1/k!)Z with eigenvalue group Z"},
      {"sec43", false,
       "group data over Q(sqrt(5)): image Z + aZ, eigenvalue group Z + 2aZ, "
       "a the golden angle"},
  };
}

bool catalog_is_tower(const std::string& name) {
  if (name == "fibonacci" || name == "inf-demo") return true;
  if (name.rfind("sturmian-cf:", 0) == 0) return true;
  if (name.rfind("odometer", 0) == 0) return true;
  if (name == "sec42" || name == "sec43") return false;
  throw Error("unknown catalog entry: " + name);
}

Tower catalog_tower(const std::string& name, int levels) {
  if (name == "fibonacci") {
    DiagramSpec s = sturmian_spec({Int(1)});
    s.name = "fibonacci";
    return Tower::build(s, levels);
  }
  if (name.rfind("sturmian-cf:", 0) == 0) {
    auto cf = parse_int_list(name.substr(12), "sturmian block");
    return Tower::build(sturmian_spec(cf), levels);
  }
  if (name.rfind("odometer:", 0) == 0) {
    auto bases = parse_int_list(name.substr(9), "odometer bases");
    return Tower::build(odometer_spec(bases), levels);
  }
  if (name.rfind("odometer", 0) == 0) {
    auto base = parse_int_list(name.substr(8), "odometer base");
    if (base.size() != 1) throw Error("odometer<d> takes a single base");
    return Tower::build(odometer_spec(base), levels);
  }
  if (name == "inf-demo") {
    DiagramSpec s;
    s.kind = DiagramSpec::Kind::Stationary;
    s.matrix = IntMat(2, 2, {Int(3), Int(1), Int(1), Int(3)});
    s.name = "inf-demo";
    return Tower::build(s, levels);
  }
  throw Error("catalog entry is not a tower: " + name);
}

CatalogGroups catalog_groups(const std::string& name, int level) {
  if (name == "sec42") {
    if (level < 1) throw Error("sec42 level must be >= 1");
    Int fact = 1;
    for (int k = 2; k <= level; ++k) fact *= k;
    FieldPtr q = NumberField::rationals();
    std::vector<FieldElement> igens{FieldElement(Rat(1)),
                                    FieldElement(make_rat(Int(1), fact))};
    std::vector<FieldElement> egens{FieldElement(Rat(1))};
    CatalogGroups out{SubgroupOfR::from_elements(q, igens),
                      SubgroupOfR::from_elements(q, egens),
                      "image approximant (1/" + fact.get_str() +
                          ")Z against eigenvalue group Z"};
    return out;
  }
  if (name == "sec43") {
    FieldElement a = golden_angle();
    const FieldPtr& f = a.field();
    std::vector<FieldElement> igens{FieldElement(Rat(1)), a};
    std::vector<FieldElement> egens{FieldElement(Rat(1)), FieldElement(Rat(2)) * a};
    CatalogGroups out{SubgroupOfR::from_elements(f, igens),
                      SubgroupOfR::from_elements(f, egens),
                      "golden image group against its index-two eigenvalue subgroup"};
    return out;
  }
  throw Error("catalog entry has no group data: " + name);
}

}  // namespace cantor
