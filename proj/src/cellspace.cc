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

#include "tracefold/cellspace.h"

#include <string>
#include <unordered_map>
#include <unordered_set>

namespace tracefold {

struct CellSpace::Data {
  std::uint64_t version = 0;
  Rational total_mass;
  std::vector<CellPtr> cells;
  std::unordered_map<CellId, std::size_t> index;
  CellId next_id = 0;
  // FNV-1a over the refinement history; distinguishes sibling branches that
  // happen to share a version number.
  std::uint64_t fingerprint = 1469598103934665603ULL;

  void mix(const std::string& event) {
    for (unsigned char c : event) {
      fingerprint ^= c;
      fingerprint *= 1099511628211ULL;
    }
  }

  void reindex() {
    index.clear();
    index.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) index.emplace(cells[i]->id, i);
  }
};

CellSpace CellSpace::create(const Rational& total_mass) {
  if (total_mass <= 0) throw PreconditionError("total mass must be positive, got " + to_string(total_mass));
  auto data = std::make_shared<Data>();
  data->total_mass = total_mass;
  data->cells.push_back(std::make_shared<const Cell>(Cell{0, total_mass, nullptr, SplitKind::kRoot, 0}));
  data->next_id = 1;
  data->mix("root:" + to_string(total_mass));
  data->reindex();
  return CellSpace(std::move(data));
}

CellSpace CellSpace::from_cells(const Rational& total_mass, std::span<const std::pair<CellId, Rational>> cells) {
  if (total_mass <= 0) throw PreconditionError("total mass must be positive, got " + to_string(total_mass));
  if (cells.empty()) throw PreconditionError("a space needs at least one cell");
  auto data = std::make_shared<Data>();
  data->total_mass = total_mass;
  Rational sum = 0;
  std::unordered_set<CellId> seen;
  for (const auto& [id, mass] : cells) {
    if (mass <= 0) throw PreconditionError("cell " + std::to_string(id) + " has non-positive mass");
    if (!seen.insert(id).second) throw PreconditionError("duplicate cell id " + std::to_string(id));
    sum += mass;
    data->cells.push_back(std::make_shared<const Cell>(Cell{id, mass, nullptr, SplitKind::kRoot, 0}));
    data->next_id = std::max(data->next_id, id + 1);
    data->mix("cell:" + std::to_string(id) + ":" + to_string(mass));
  }
  if (sum != total_mass) {
    throw PreconditionError("cell masses sum to " + to_string(sum) + ", expected " + to_string(total_mass));
  }
  data->reindex();
  return CellSpace(std::move(data));
}

std::uint64_t CellSpace::version() const { return data_->version; }
const Rational& CellSpace::total_mass() const { return data_->total_mass; }
const std::vector<CellPtr>& CellSpace::cells() const { return data_->cells; }
std::size_t CellSpace::size() const { return data_->cells.size(); }

const Cell& CellSpace::cell(CellId id) const {
  auto it = data_->index.find(id);
  if (it == data_->index.end()) {
    throw PreconditionError("unknown cell " + std::to_string(id) + " in space version " +
                            std::to_string(data_->version));
  }
  return *data_->cells[it->second];
}

CellPtr CellSpace::find(CellId id) const {
  auto it = data_->index.find(id);
  return it == data_->index.end() ? nullptr : data_->cells[it->second];
}

bool CellSpace::contains(const Cell& cell) const {
  auto it = data_->index.find(cell.id);
  return it != data_->index.end() && data_->cells[it->second].get() == &cell;
}

bool CellSpace::same_as(const CellSpace& other) const {
  if (data_ == other.data_) return true;
  return data_->version == other.data_->version && data_->fingerprint == other.data_->fingerprint &&
         data_->total_mass == other.data_->total_mass && data_->cells.size() == other.data_->cells.size();
}

namespace {

void check_open_unit(const Rational& x, const char* what) {
  if (x <= 0 || x >= 1) throw PreconditionError(std::string(what) + " must lie in (0,1), got " + to_string(x));
}

}  // namespace

std::pair<CellSpace, Refinement> CellSpace::split_mass(CellId id, const Rational& r) const {
  check_open_unit(r, "mass split ratio");
  const Cell& parent = cell(id);
  auto part = partition_mass({{id, {parent.mass * r, parent.mass - parent.mass * r}}});
  const auto& kids = part.children.at(id);
  Refinement ref(part.space, version(), id, Refinement::Kind::kMassSplit, r, kids[0], kids[1]);
  return {std::move(part.space), std::move(ref)};
}

std::pair<CellSpace, Refinement> CellSpace::split_coord(CellId id, const Rational& t) const {
  check_open_unit(t, "coordinate split point");
  auto pos = data_->index.find(id);
  if (pos == data_->index.end()) cell(id);  // throws
  const CellPtr& parent = data_->cells[pos->second];

  auto data = std::make_shared<Data>(*data_);
  const CellId left = data->next_id++;
  const CellId right = data->next_id++;
  auto l = std::make_shared<const Cell>(Cell{left, parent->mass * t, parent, SplitKind::kCoordLeft, t});
  auto r = std::make_shared<const Cell>(Cell{right, parent->mass - l->mass, parent, SplitKind::kCoordRight, t});
  data->cells[pos->second] = l;
  data->cells.insert(data->cells.begin() + static_cast<std::ptrdiff_t>(pos->second) + 1, r);
  data->version += 1;
  data->mix("coord:" + std::to_string(id) + ":" + to_string(t));
  data->reindex();
  CellSpace space(std::move(data));
  Refinement ref(space, version(), id, Refinement::Kind::kCoordSplit, t, left, right);
  return {std::move(space), std::move(ref)};
}

CellSpace::Partition CellSpace::partition_mass(const std::map<CellId, std::vector<Rational>>& pieces) const {
  for (const auto& [id, parts] : pieces) {
    const Cell& c = cell(id);
    if (parts.empty()) throw PreconditionError("empty partition for cell " + std::to_string(id));
    Rational sum = 0;
    for (const auto& p : parts) {
      if (p <= 0) throw PreconditionError("partition pieces must be positive");
      sum += p;
    }
    if (sum != c.mass) throw PreconditionError("partition of cell " + std::to_string(id) + " does not sum to its mass");
  }

  if (pieces.empty()) return {*this, {}};

  auto data = std::make_shared<Data>();
  data->total_mass = data_->total_mass;
  data->version = data_->version;
  data->next_id = data_->next_id;
  data->fingerprint = data_->fingerprint;
  data->cells.reserve(data_->cells.size() + pieces.size());

  std::map<CellId, std::vector<CellId>> children;
  for (const CellPtr& c : data_->cells) {
    auto it = pieces.find(c->id);
    if (it == pieces.end() || it->second.size() == 1) {
      data->cells.push_back(c);
      if (it != pieces.end()) children[c->id] = {c->id};
      continue;
    }
    const auto& parts = it->second;
    auto& kids = children[c->id];
    CellPtr current = c;
    Rational remaining = c->mass;
    std::string event = "mass:" + std::to_string(c->id);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      Rational r = parts[i] / remaining;
      auto left = std::make_shared<const Cell>(Cell{data->next_id++, parts[i], current, SplitKind::kMassLeft, r});
      auto right = std::make_shared<const Cell>(
          Cell{data->next_id++, remaining - parts[i], current, SplitKind::kMassRight, r});
      data->cells.push_back(left);
      kids.push_back(left->id);
      remaining -= parts[i];
      current = std::move(right);
      data->version += 1;
      event += ":" + to_string(r);
    }
    data->cells.push_back(current);
    kids.push_back(current->id);
    data->mix(event);
  }
  data->reindex();
  return {CellSpace(std::move(data)), std::move(children)};
}

RunSlices slice_run(const CellSpace& space, std::span<const CellId> run, std::span<const Rational> cuts) {
  const Rational total = mass_of(space, run);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i] < 0 || cuts[i] > total || (i > 0 && cuts[i] < cuts[i - 1])) {
      throw PreconditionError("cuts must be non-decreasing within [0, " + to_string(total) + "]");
    }
  }

  // First pass: decide the pieces of every straddled cell.
  std::map<CellId, std::vector<Rational>> pieces;
  {
    Rational start = 0;
    std::size_t k = 0;
    for (CellId id : run) {
      const Rational& m = space.mass(id);
      const Rational end = start + m;
      while (k < cuts.size() && cuts[k] <= start) ++k;
      std::vector<Rational> parts;
      Rational pos = start;
      for (std::size_t j = k; j < cuts.size() && cuts[j] < end; ++j) {
        if (cuts[j] > pos) {
          parts.push_back(cuts[j] - pos);
          pos = cuts[j];
        }
      }
      if (!parts.empty()) {
        parts.push_back(end - pos);
        pieces.emplace(id, std::move(parts));
      }
      start = end;
    }
  }
  auto part = space.partition_mass(pieces);

  // Second pass: walk the refined run and bucket cells between cuts.
  RunSlices out{part.space, std::vector<std::vector<CellId>>(cuts.size() + 1)};
  Rational pos = 0;
  std::size_t seg = 0;
  for (CellId id : run) {
    auto it = part.children.find(id);
    std::vector<CellId> kids = it == part.children.end() ? std::vector<CellId>{id} : it->second;
    for (CellId kid : kids) {
      while (seg < cuts.size() && cuts[seg] <= pos) ++seg;
      out.segments[seg].push_back(kid);
      pos += part.space.mass(kid);
    }
  }
  return out;
}

Rational mass_of(const CellSpace& space, std::span<const CellId> cells) {
  Rational sum = 0;
  for (CellId id : cells) sum += space.mass(id);
  return sum;
}

std::map<CellId, CellId> ancestry(const CellSpace& source, const CellSpace& target) {
  if (source.total_mass() != target.total_mass()) {
    throw PreconditionError("spaces have different total mass");
  }
  std::map<CellId, CellId> out;
  std::unordered_map<const Cell*, CellId> memo;
  for (const CellPtr& c : target.cells()) {
    std::vector<const Cell*> chain;
    const Cell* cur = c.get();
    CellId found = 0;
    bool ok = false;
    while (cur != nullptr) {
      if (auto m = memo.find(cur); m != memo.end()) {
        found = m->second;
        ok = true;
        break;
      }
      if (source.contains(*cur)) {
        found = cur->id;
        ok = true;
        break;
      }
      chain.push_back(cur);
      cur = cur->parent.get();
    }
    if (!ok) {
      throw PreconditionError("space version " + std::to_string(target.version()) +
                              " is not a refinement of version " + std::to_string(source.version()));
    }
    for (const Cell* x : chain) memo.emplace(x, found);
    out.emplace(c->id, found);
  }
  return out;
}

}  // namespace tracefold
