#include "gmatch/graph.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gmatch {

std::size_t BitMatrix::upper_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) count += get(i, j);
  }
  return count;
}

bool BitMatrix::is_simple_undirected() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (get(i, i)) return false;
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (get(i, j) != get(j, i)) return false;
    }
  }
  return true;
}

void BitMatrix::swap_vertices(std::size_t i, std::size_t j) {
  if (i == j) return;
  auto row_i = row(i);
  auto row_j = row(j);
  for (std::size_t w = 0; w < words_per_row_; ++w) std::swap(row_i[w], row_j[w]);

  const std::size_t word_i = i / 64;
  const std::size_t word_j = j / 64;
  const std::size_t shift_i = i % 64;
  const std::size_t shift_j = j % 64;
  std::uint64_t* base = bits_.data();
  for (std::size_t r = 0; r < n_; ++r, base += words_per_row_) {
    // flip both bits exactly when they differ
    const std::uint64_t differ = ((base[word_i] >> shift_i) ^ (base[word_j] >> shift_j)) & 1U;
    base[word_i] ^= differ << shift_i;
    base[word_j] ^= differ << shift_j;
  }
}

std::string_view to_string(Relabel mode) {
  return mode == Relabel::identity ? "identity" : "random";
}

Relabel parse_relabel(std::string_view name) {
  if (name == "identity") return Relabel::identity;
  if (name == "random") return Relabel::random;
  throw std::invalid_argument("unknown relabel mode '" + std::string(name) + "'");
}

GraphPair generate_pair(std::size_t n, double edge_probability, Relabel relabel,
                        std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("graph pair needs n >= 2");
  if (!(edge_probability > 0.0 && edge_probability < 1.0)) {
    throw std::invalid_argument("edge probability must lie in (0, 1)");
  }
  Rng rng(seed);
  GraphPair pair;
  pair.first = BitMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.chance(edge_probability)) {
        pair.first.set(i, j, true);
        pair.first.set(j, i, true);
      }
    }
  }
  pair.ground_truth =
      relabel == Relabel::identity ? Permutation::identity(n) : random_permutation(n, rng);
  const auto gt = pair.ground_truth.zero_based();
  pair.second = BitMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (pair.first.get(i, j)) pair.second.set(gt[i], gt[j], true);
    }
  }
  pair.edge_probability = edge_probability;
  pair.seed = seed;
  pair.relabel = relabel;
  return pair;
}

bool is_isomorphic_pair(const GraphPair& pair) {
  const auto n = pair.size();
  if (pair.second.size() != n || pair.ground_truth.size() != n) return false;
  if (!pair.first.is_simple_undirected() || !pair.second.is_simple_undirected()) return false;
  const auto gt = pair.ground_truth.zero_based();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (pair.second.get(gt[i], gt[j]) != pair.first.get(i, j)) return false;
    }
  }
  return true;
}

namespace {

void require_size(const GraphPair& pair, std::size_t n) {
  if (pair.size() != n) {
    throw std::invalid_argument("candidate size " + std::to_string(n) +
                                " does not match graph size " + std::to_string(pair.size()));
  }
}

}  // namespace

std::uint64_t structural_energy(const GraphPair& pair, const Permutation& p) {
  require_size(pair, p.size());
  const auto images = p.zero_based();
  const auto n = pair.size();
  std::uint64_t mismatches = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      mismatches += pair.first.get(i, j) != pair.second.get(images[i], images[j]);
    }
  }
  return mismatches;
}

std::int64_t structural_energy_delta_swap(const GraphPair& pair, const Permutation& p,
                                          std::size_t i, std::size_t j) {
  require_size(pair, p.size());
  const auto n = pair.size();
  if (i < 1 || i > n || j < 1 || j > n) throw std::out_of_range("swap position out of range");
  if (i == j) throw std::invalid_argument("swap positions must differ");
  const std::size_t a = i - 1;
  const std::size_t b = j - 1;
  const auto images = p.zero_based();
  const auto pa = images[a];
  const auto pb = images[b];
  std::int64_t delta = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == a || k == b) continue;
    const auto pk = images[k];
    const bool first_a = pair.first.get(a, k);
    const bool first_b = pair.first.get(b, k);
    const bool second_a = pair.second.get(pa, pk);
    const bool second_b = pair.second.get(pb, pk);
    delta += static_cast<int>(first_a != second_b) - static_cast<int>(first_a != second_a) +
             static_cast<int>(first_b != second_a) - static_cast<int>(first_b != second_b);
  }
  return delta;
}

std::int64_t structural_energy_delta(const GraphPair& pair, std::span<const std::uint32_t> before,
                                     std::span<const std::uint32_t> after,
                                     std::span<const std::uint32_t> changed) {
  const auto n = pair.size();
  std::vector<bool> in_changed(n, false);
  for (auto c : changed) in_changed[c] = true;
  std::int64_t delta = 0;
  for (auto a : changed) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == a) continue;
      // pairs inside the changed set are visited twice; count them from the
      // smaller index only
      if (in_changed[k] && k < a) continue;
      const bool edge = pair.first.get(a, k);
      delta += static_cast<int>(edge != pair.second.get(after[a], after[k])) -
               static_cast<int>(edge != pair.second.get(before[a], before[k]));
    }
  }
  return delta;
}

Ratio oracle_energy(const GraphPair& pair, const Permutation& p) {
  require_size(pair, p.size());
  return energy(p, pair.ground_truth);
}

SwapEvaluator::SwapEvaluator(const GraphPair& pair, std::span<const std::uint32_t> candidate)
    : first_(&pair.first), permuted_(pair.size()) {
  const auto n = pair.size();
  if (candidate.size() != n) throw std::invalid_argument("candidate size mismatch");
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (pair.second.get(candidate[a], candidate[b])) permuted_.set(a, b, true);
    }
  }
  std::uint64_t twice = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const auto x = first_->row(a);
    const auto y = permuted_.row(a);
    for (std::size_t w = 0; w < x.size(); ++w) twice += std::popcount(x[w] ^ y[w]);
  }
  energy_ = twice / 2;
}

std::int64_t SwapEvaluator::delta(std::size_t i, std::size_t j) const {
  const auto first_i = first_->row(i);
  const auto first_j = first_->row(j);
  const auto perm_i = permuted_.row(i);
  const auto perm_j = permuted_.row(j);
  // After the swap, row i of the relabeled graph is old row j (and vice versa)
  // outside columns i and j.
  std::int64_t delta = 0;
  for (std::size_t w = 0; w < first_i.size(); ++w) {
    delta += std::popcount(first_i[w] ^ perm_j[w]) - std::popcount(first_i[w] ^ perm_i[w]) +
             std::popcount(first_j[w] ^ perm_i[w]) - std::popcount(first_j[w] ^ perm_j[w]);
  }
  for (const std::size_t k : {i, j}) {
    const bool fi = first_->get(i, k);
    const bool fj = first_->get(j, k);
    const bool pi = permuted_.get(i, k);
    const bool pj = permuted_.get(j, k);
    delta -= static_cast<int>(fi != pj) - static_cast<int>(fi != pi) + static_cast<int>(fj != pi) -
             static_cast<int>(fj != pj);
  }
  return delta;
}

void SwapEvaluator::apply(std::size_t i, std::size_t j, std::int64_t delta) {
  permuted_.swap_vertices(i, j);
  energy_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(energy_) + delta);
}

namespace {

void write_matrix(std::ostream& out, const BitMatrix& m) {
  std::string line(m.size(), '0');
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) line[j] = m.get(i, j) ? '1' : '0';
    out << line << '\n';
  }
}

BitMatrix read_matrix(std::istream& in, std::size_t n) {
  BitMatrix m(n);
  std::string line;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("graph file truncated");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != n) {
      throw std::runtime_error("graph row " + std::to_string(i + 1) + " has length " +
                               std::to_string(line.size()) + ", expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (line[j] == '1') {
        m.set(i, j, true);
      } else if (line[j] != '0') {
        throw std::runtime_error("graph rows may contain only 0 and 1");
      }
    }
  }
  return m;
}

}  // namespace

void write_pair(std::ostream& out, const GraphPair& pair) {
  char probability[32];
  std::snprintf(probability, sizeof probability, "%.17g", pair.edge_probability);
  out << pair.size() << ' ' << probability << ' ' << pair.seed << ' ' << to_string(pair.relabel)
      << '\n';
  write_matrix(out, pair.first);
  write_matrix(out, pair.second);
  out << pair.ground_truth.to_string() << '\n';
}

GraphPair read_pair(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("graph file is empty");
  std::istringstream fields(header);
  std::size_t n = 0;
  GraphPair pair;
  std::string mode;
  if (!(fields >> n >> pair.edge_probability >> pair.seed >> mode) || n == 0) {
    throw std::runtime_error("bad graph header '" + header + "'");
  }
  try {
    pair.relabel = parse_relabel(mode);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
  pair.first = read_matrix(in, n);
  pair.second = read_matrix(in, n);
  std::string truth;
  if (!std::getline(in, truth)) throw std::runtime_error("graph file missing ground truth");
  try {
    pair.ground_truth = Permutation::parse(truth);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("bad ground truth: ") + e.what());
  }
  if (!is_isomorphic_pair(pair)) {
    throw std::runtime_error("graph file does not describe an isomorphic pair");
  }
  return pair;
}

}  // namespace gmatch
