#pragma once

// Kakutani-Rohlin tower sequences in matrix form.  Level n has C_n towers;
// M_n is the C_n x C_{n-1} incidence matrix, with C_0 = 1 and M_1 a column
// of ones, so level-1 heights are all 1.  Heights obey H_n = M_n H_{n-1};
// transition products P_{n,m} = M_n ... M_{m+1} satisfy P_{n,m} H_m = H_n.
// Every matrix above level 1 must be strictly positive; builds compose
// consecutive levels (bounded window) to reach positivity and record the
// composition.  Each level carries a Vershik order: for every vertex, the
// ordered list of its sub-column sources at the previous level.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cantor/intmat.hpp"
#include "cantor/numberfield.hpp"

namespace cantor {

struct VershikOrder {
  int level = 0;   // order applies to vertices of this level, 2-based
  int vertex = 1;  // 1-based
  std::vector<int> sources;  // 1-based vertices of level-1 below, in visit order
};

struct DiagramSpec {
  enum class Kind { Stationary, Explicit, Sturmian, Odometer };
  Kind kind = Kind::Stationary;

  IntMat matrix;                // Stationary
  std::vector<IntMat> matrices; // Explicit: raw supply from level 2 up,
                                // composed as needed for positivity
  std::vector<Int> cf;          // Sturmian: repeated continued-fraction block
  std::vector<Int> bases;       // Odometer: cycled base list, entries >= 2

  std::vector<VershikOrder> orders;  // optional overrides, pre-composition
  std::optional<FieldElement> declared_angle;  // addressed rotation angle, if any
  std::string name;

  static DiagramSpec from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// Level-n matrix [[a_n, 1], [1, 0]]; the repeated block defines a
// quadratic irrational angle, recorded on the spec.  A constant block
// collapses to a stationary spec.
DiagramSpec sturmian_spec(const std::vector<Int>& cf);
DiagramSpec odometer_spec(const std::vector<Int>& bases);

struct BuildOptions {
  int composition_bound = 10;  // max consecutive levels composed per step
};

struct CompositionRecord {
  // For each built level n >= 2, how many consecutive source-levels were
  // composed to form M_n.
  std::vector<int> window;
};

struct SuffixSet {
  int level = 0;  // suffixes of level-n sub-columns, per vertex of level n+1
  // per_vertex[l-1] = deduplicated tail-count vectors (each of length C_n),
  // in order of first appearance from the full tail down to the empty one.
  std::vector<std::vector<std::vector<Int>>> per_vertex;
};

// A cylinder point: vertex at `level`, plus for k = level-1 down to 1 the
// 1-based sub-column position chosen at level k+1.  positions[k-1] is the
// position at level k+1.
struct TowerPath {
  int level = 1;
  int top_vertex = 1;
  std::vector<int> positions;
};

class Tower {
 public:
  static Tower build(const DiagramSpec& spec, int levels, const BuildOptions& opts = {});

  int levels() const;                       // N
  int C(int n) const;                       // towers at level n, 1 <= n <= N
  const IntMat& matrix(int n) const;        // M_n, 1 <= n <= N
  const std::vector<Int>& heights(int n) const;          // H_n
  // P_{n,m} = M_n ... M_{m+1}, 1 <= m < n <= N; cached.
  IntMat product(int n, int m) const;
  // Visit order of vertex l (1-based) at level n >= 2.
  const std::vector<int>& order(int n, int l) const;

  SuffixSet suffix_set(int n) const;        // 1 <= n < N

  // New tower whose level j is built from levels (cuts[j-1], cuts[j]] of
  // this one; cuts must start at 1, be strictly increasing, end <= N.
  Tower telescope(const std::vector<int>& cuts) const;

  // The common level matrix when one matrix repeats for every n >= 2,
  // including beyond the built depth.
  std::optional<IntMat> stationary_matrix() const;
  bool is_scalar() const;                   // all C_n == 1

  // Infinite continuation of the level matrices beyond the built depth,
  // known for stationary, sturmian, and odometer specs: level matrices
  // keep composing out of a cyclic raw supply, so the sequence of M_n for
  // n > levels() is determined by a finite state.
  enum class Continuation { None, RepeatMatrix, CycleMatrices };
  Continuation continuation() const;
  // True when every level n >= 2, built or not, carries the same matrix
  // and the same visit orders (repeating matrix, no per-level overrides).
  bool uniform_orders() const;
  // State of level n >= 1: equal states imply identical matrix sequences
  // M_{n+1}, M_{n+2}, ...  Throws when continuation() == None.
  int continuation_state(int n) const;
  // The next level matrix from a state, with the successor state.
  std::pair<IntMat, int> continuation_next(int state) const;

  const CompositionRecord& composition() const;
  const std::optional<FieldElement>& declared_angle() const;
  const std::string& name() const;

  // Entrance time r_n of the cylinder point into the union of level-n
  // bases, n = path.level: sum over k < n of <s_k, H_k> with s_k the
  // tail counts at level k+1 (shifted by one when the point sits at the
  // start of its sub-column).
  Int entrance_time(const TowerPath& path) const;

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

// All paths with the given top level, enumeration order: top vertex, then
// positions lexicographically (first position fastest... fixed and
// documented: last level's position varies slowest).
std::vector<TowerPath> enumerate_paths(const Tower& t, int level);

}  // namespace cantor
