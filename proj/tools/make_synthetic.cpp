// Writes the bundled synthetic epidemic-like dataset: two large chain-like
// blocks with skewed attribute mixes, a small clique hanging off one block
// and a scatter of tiny components.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "vmine/random.hpp"

namespace {

constexpr std::size_t kBlockSize = 260;
constexpr std::size_t kCliqueSize = 8;
constexpr std::size_t kTotal = 600;

struct Person {
  std::string block;
  std::string orientation;
  int year = 0;
};

std::string pick(vmine::Rng& rng, const std::vector<std::pair<std::string, double>>& weights) {
  double u = rng.unit();
  for (const auto& [value, w] : weights) {
    if (u < w) return value;
    u -= w;
  }
  return weights.back().first;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : "data/synthetic";
  const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 20240601;
  std::filesystem::create_directories(out);
  vmine::Rng rng(seed);

  std::vector<Person> people(kTotal);
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  // Each new case is traced from a recent earlier case of the same block,
  // giving long sparse chains, plus a few extra contacts.
  auto grow_block = [&](std::size_t first, std::size_t n, int first_year) {
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t window = std::min<std::size_t>(i, 25);
      edges.emplace_back(first + i - 1 - rng.below(window), first + i);
    }
    for (std::size_t e = 0; e < n / 5; ++e) {
      const std::size_t a = rng.below(n);
      std::size_t b = rng.below(n);
      if (a == b) b = (b + 1) % n;
      edges.emplace_back(first + a, first + b);
    }
    for (std::size_t i = 0; i < n; ++i) {
      people[first + i].year = first_year + static_cast<int>(i * 10 / n) + static_cast<int>(rng.below(3));
    }
  };

  const std::size_t a0 = 0, b0 = kBlockSize, c0 = 2 * kBlockSize, s0 = c0 + kCliqueSize;
  grow_block(a0, kBlockSize, 1986);
  grow_block(b0, kBlockSize, 1992);
  for (std::size_t i = 0; i < kBlockSize; ++i) {
    people[a0 + i].block = "A";
    people[a0 + i].orientation = pick(rng, {{"msm", 0.75}, {"het_man", 0.1}, {"woman", 0.15}});
    people[b0 + i].block = "B";
    people[b0 + i].orientation = pick(rng, {{"msm", 0.15}, {"het_man", 0.4}, {"woman", 0.45}});
  }

  // Sparse bridges between the blocks keep them in one giant component.
  for (int e = 0; e < 6; ++e) edges.emplace_back(a0 + rng.below(kBlockSize), b0 + rng.below(kBlockSize));

  for (std::size_t i = 0; i < kCliqueSize; ++i) {
    people[c0 + i] = {"C", "msm", 1998};
    for (std::size_t j = i + 1; j < kCliqueSize; ++j) edges.emplace_back(c0 + i, c0 + j);
  }
  edges.emplace_back(c0, a0 + kBlockSize / 2);

  // Remaining cases: pairs, triples and singletons.
  std::size_t v = s0;
  for (int t = 0; t < 8; ++t, v += 3) {
    edges.emplace_back(v, v + 1);
    edges.emplace_back(v + 1, v + 2);
  }
  for (int t = 0; t < 10; ++t, v += 2) edges.emplace_back(v, v + 1);
  for (std::size_t i = s0; i < kTotal; ++i) {
    people[i].block = "S";
    people[i].orientation = pick(rng, {{"msm", 0.4}, {"het_man", 0.3}, {"woman", 0.3}});
    people[i].year = 1988 + static_cast<int>(rng.below(17));
  }

  // A few cases with unknown orientation.
  for (int i = 0; i < 12; ++i) people[rng.below(kTotal)].orientation.clear();

  // Identifiers are assigned in shuffled order so they carry no block signal.
  std::vector<std::size_t> order(kTotal);
  for (std::size_t i = 0; i < kTotal; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::string> id(kTotal);
  for (std::size_t i = 0; i < kTotal; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "P%04zu", order[i] + 1);
    id[i] = buf;
  }

  std::ofstream nodes(out / "nodes.csv");
  nodes << "id,orientation,year,block\n";
  std::vector<std::size_t> by_id(kTotal);
  for (std::size_t i = 0; i < kTotal; ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t x, std::size_t y) { return id[x] < id[y]; });
  for (std::size_t i : by_id) {
    const auto& p = people[i];
    nodes << id[i] << "," << (p.orientation.empty() ? "NA" : p.orientation) << "," << p.year << ","
          << p.block << "\n";
  }

  // Drop repeats and loops produced by the random extras, then re-declare a
  // handful of edges (reversed) as the registry would.
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::pair<std::size_t, std::size_t>> unique;
  for (auto [x, y] : edges) {
    if (x == y || !seen.insert(std::minmax(x, y)).second) continue;
    unique.emplace_back(x, y);
  }
  std::ofstream edge_file(out / "edges.csv");
  edge_file << "source,target,direction\n";
  static const char* kDirections[] = {"", "uv", "vu"};
  for (auto [x, y] : unique) edge_file << id[x] << "," << id[y] << "," << kDirections[rng.below(3)] << "\n";
  for (int i = 0; i < 4; ++i) {
    const auto [x, y] = unique[rng.below(unique.size())];
    edge_file << id[y] << "," << id[x] << ",\n";
  }

  nlohmann::json manifest{{"format_version", "1"},
                          {"nodes", {{"path", "nodes.csv"}, {"id_column", "id"}}},
                          {"edges",
                           {{"path", "edges.csv"},
                            {"source_column", "source"},
                            {"target_column", "target"},
                            {"direction_column", "direction"}}},
                          {"attributes", {{"orientation", "categorical"}, {"year", "integer"}, {"block", "categorical"}}},
                          {"year_attribute", "year"}};
  std::ofstream(out / "manifest.json") << manifest.dump(2) << "\n";

  nlohmann::json truth{{"blocks", nlohmann::json::object()}, {"clique", nlohmann::json::array()}};
  for (std::size_t i = 0; i < kTotal; ++i) truth["blocks"][id[i]] = people[i].block;
  for (std::size_t i = 0; i < kCliqueSize; ++i) truth["clique"].push_back(id[c0 + i]);
  std::ofstream(out / "truth.json") << truth.dump(2) << "\n";

  std::cout << "wrote " << unique.size() << " edges over " << kTotal << " nodes to " << out.string() << "\n";
  return 0;
}
