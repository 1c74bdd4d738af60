#pragma once

// Built-in systems: towers for the worked dynamical examples and
// group-level data for the torsion constructions.

#include <optional>
#include <string>
#include <vector>

#include "cantor/dimgroup.hpp"
#include "cantor/tower.hpp"

namespace cantor {

struct CatalogEntry {
  std::string name;
  bool is_tower = true;  // false: group-level data only (torsion command)
  std::string description;
};

std::vector<CatalogEntry> catalog_entries();

// Tower-backed entries: "fibonacci", "sturmian-cf:<a,b,...>", "odometer<d>",
// "inf-demo".  Throws for group-level names.
Tower catalog_tower(const std::string& name, int levels);

struct CatalogGroups {
  SubgroupOfR image;       // I-approximant at the requested level
  SubgroupOfR eigen;       // E
  std::string description;
};
// Group-level entries: "sec42" (level k: I = (1/k!)Z, E = Z),
// "sec43" (I = Z + alpha Z, E = Z + 2 alpha Z, alpha the golden rotation
// number; level ignored).
CatalogGroups catalog_groups(const std::string& name, int level);

bool catalog_is_tower(const std::string& name);

}  // namespace cantor
