// Copyright 2026 The Tracefold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRACEFOLD_CELLSPACE_H_
#define TRACEFOLD_CELLSPACE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "tracefold/rational.h"

namespace tracefold {

using CellId = std::uint64_t;

/// How a cell came to exist. Mass splits duplicate the parent's coordinate
/// on both children; coordinate splits cut the parent's coordinate range
/// [0,1] at `param` and reparameterize each half back onto [0,1].
enum class SplitKind : std::uint8_t { kRoot, kMassLeft, kMassRight, kCoordLeft, kCoordRight };

/// One atom of the finite measure space. Cells are immutable and shared
/// between every space version that still contains them; `parent` links
/// form the lineage used to remap data onto refinements.
struct Cell {
  CellId id = 0;
  Rational mass;
  std::shared_ptr<const Cell> parent;
  SplitKind kind = SplitKind::kRoot;
  Rational param;
};

using CellPtr = std::shared_ptr<const Cell>;

class Refinement;

/// Immutable, versioned finite partition of a measure space of total mass
/// `total_mass()`. Each cell carries an intrinsic uniform coordinate u in
/// [0,1]. Handles are cheap to copy; all refining operations return a new
/// space and leave this one untouched.
class CellSpace {
 public:
  /// A single root cell carrying the whole mass. Throws on total_mass <= 0.
  static CellSpace create(const Rational& total_mass);

  /// Rebuilds a space from serialized (id, mass) pairs; every cell is a root.
  static CellSpace from_cells(const Rational& total_mass, std::span<const std::pair<CellId, Rational>> cells);

  std::uint64_t version() const;
  const Rational& total_mass() const;
  const std::vector<CellPtr>& cells() const;
  std::size_t size() const;

  /// Throws PreconditionError for unknown ids.
  const Cell& cell(CellId id) const;
  const Rational& mass(CellId id) const { return cell(id).mass; }
  /// nullptr when the id is not a cell of this version.
  CellPtr find(CellId id) const;
  /// Identity test: the very same cell object lives in this version.
  bool contains(const Cell& cell) const;

  /// True for the same version of the same refinement history.
  bool same_as(const CellSpace& other) const;

  std::pair<CellSpace, Refinement> split_mass(CellId cell, const Rational& r) const;
  std::pair<CellSpace, Refinement> split_coord(CellId cell, const Rational& t) const;

  struct Partition;
  /// Replaces every listed cell by consecutive mass-split children whose
  /// masses are the given pieces (each > 0, summing to the cell's mass).
  /// Realized as a chain of binary mass splits so lineage stays binary.
  Partition partition_mass(const std::map<CellId, std::vector<Rational>>& pieces) const;

 private:
  struct Data;
  explicit CellSpace(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

struct CellSpace::Partition {
  CellSpace space;
  /// For each partitioned cell, its children in order (left first).
  std::map<CellId, std::vector<CellId>> children;
};

/// Record of one binary split between two consecutive versions.
class Refinement {
 public:
  enum class Kind : std::uint8_t { kMassSplit, kCoordSplit };

  Refinement(CellSpace target, std::uint64_t from_version, CellId parent, Kind kind, Rational param, CellId left,
             CellId right)
      : target_(std::move(target)),
        from_version_(from_version),
        parent_(parent),
        kind_(kind),
        param_(std::move(param)),
        left_(left),
        right_(right) {}

  const CellSpace& target() const { return target_; }
  std::uint64_t from_version() const { return from_version_; }
  std::uint64_t to_version() const { return target_.version(); }
  CellId parent() const { return parent_; }
  Kind kind() const { return kind_; }
  const Rational& param() const { return param_; }
  CellId left() const { return left_; }
  CellId right() const { return right_; }

 private:
  CellSpace target_;
  std::uint64_t from_version_;
  CellId parent_;
  Kind kind_;
  Rational param_;
  CellId left_;
  CellId right_;
};

/// Result of cutting an ordered run of cells at cumulative-mass positions.
struct RunSlices {
  CellSpace space;
  /// segments.size() == cuts.size() + 1; segment i holds the cells between
  /// cut i-1 and cut i, in run order.
  std::vector<std::vector<CellId>> segments;
};

/// Cuts `run` at the given cumulative masses (non-decreasing, within
/// [0, mass(run)]), mass-splitting cells that straddle a cut.
RunSlices slice_run(const CellSpace& space, std::span<const CellId> run, std::span<const Rational> cuts);

/// Total mass of the listed cells.
Rational mass_of(const CellSpace& space, std::span<const CellId> cells);

/// Maps every cell of `target` (a refinement of `source`) to the cell of
/// `source` it descends from. Throws PreconditionError when `target` is not
/// a refinement of `source`.
std::map<CellId, CellId> ancestry(const CellSpace& source, const CellSpace& target);

}  // namespace tracefold

#endif  // TRACEFOLD_CELLSPACE_H_
