#include "rgd/motif.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <map>
#include <numeric>
#include <stdexcept>

namespace rgd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

void check_order(int k) {
  if (k < 1 || k > kMaxMotifOrder)
    fail("motif order must lie in [1, " + std::to_string(kMaxMotifOrder) + "]");
}

AdjacencyBits permuted(int k, AdjacencyBits adj, const std::array<int, kMaxMotifOrder>& perm) {
  AdjacencyBits out = 0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (adj & arc_bit(k, perm[i], perm[j])) out |= arc_bit(k, i, j);
  return out;
}

// Row-major matrix read with entry (0,0) as the most significant bit.
std::uint64_t matrix_word(int k, AdjacencyBits adj) {
  std::uint64_t w = 0;
  for (int p = 0; p < k * k; ++p) w = (w << 1) | ((adj >> p) & 1U);
  return w;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    fail("pattern literal: expected integer for " + std::string(what) + ", got '" +
         std::string(s) + "'");
  return v;
}

}  // namespace

std::string canonical_code(int k, AdjacencyBits adjacency) {
  check_order(k);
  std::array<int, kMaxMotifOrder> perm{};
  std::iota(perm.begin(), perm.begin() + k, 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    best = std::min(best, matrix_word(k, permuted(k, adjacency, perm)));
  } while (std::next_permutation(perm.begin(), perm.begin() + k));
  const int bytes = (k * k + 7) / 8;
  std::string code(1, static_cast<char>(k));
  for (int b = bytes - 1; b >= 0; --b) code.push_back(static_cast<char>((best >> (8 * b)) & 0xFF));
  return code;
}

bool isomorphic(int k, AdjacencyBits a, AdjacencyBits b) {
  check_order(k);
  if (std::popcount(a) != std::popcount(b)) return false;
  std::array<int, kMaxMotifOrder> perm{};
  std::iota(perm.begin(), perm.begin() + k, 0);
  do {
    if (permuted(k, a, perm) == b) return true;
  } while (std::next_permutation(perm.begin(), perm.begin() + k));
  return false;
}

bool weakly_connected(int k, AdjacencyBits adjacency) {
  unsigned reached = 1U;
  for (bool grew = true; grew;) {
    grew = false;
    for (int i = 0; i < k; ++i) {
      if (!(reached >> i & 1U)) continue;
      for (int j = 0; j < k; ++j) {
        if (reached >> j & 1U) continue;
        if ((adjacency & arc_bit(k, i, j)) || (adjacency & arc_bit(k, j, i))) {
          reached |= 1U << j;
          grew = true;
        }
      }
    }
  }
  return reached == (1U << k) - 1U;
}

MotifPattern::MotifPattern(int k, const std::vector<std::pair<int, int>>& arcs) : k_(k) {
  check_order(k);
  for (auto [a, b] : arcs) {
    if (a < 0 || a >= k || b < 0 || b >= k)
      fail("pattern arc " + std::to_string(a) + ">" + std::to_string(b) + " out of range for k=" +
           std::to_string(k));
    if (a == b) fail("pattern has a self-loop at " + std::to_string(a));
    adjacency_ |= arc_bit(k, a, b);
  }
  if (!weakly_connected(k, adjacency_)) fail("pattern is not weakly connected");
  code_ = canonical_code(k, adjacency_);
}

MotifPattern MotifPattern::from_bits(int k, AdjacencyBits adjacency) {
  check_order(k);
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (adjacency & arc_bit(k, i, j)) arcs.emplace_back(i, j);
  return MotifPattern(k, arcs);
}

MotifPattern MotifPattern::parse(std::string_view literal) {
  int k = -1;
  std::vector<std::pair<int, int>> arcs;
  bool saw_arcs = false;
  std::string_view rest = literal;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    std::string_view field = trim(rest.substr(0, semi));
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos)
      fail("pattern literal: expected key=value, got '" + std::string(field) + "'");
    const auto key = trim(field.substr(0, eq));
    const auto value = trim(field.substr(eq + 1));
    if (key == "k") {
      k = parse_int(value, "k");
    } else if (key == "arcs") {
      saw_arcs = true;
      std::string_view list = value;
      for (bool more = !list.empty(); more;) {
        const auto comma = list.find(',');
        const auto item = trim(list.substr(0, comma));
        more = comma != std::string_view::npos;
        if (more) list.remove_prefix(comma + 1);
        if (item.empty()) fail("pattern literal: empty arc entry");
        const auto gt = item.find('>');
        if (gt == std::string_view::npos)
          fail("pattern literal: arc '" + std::string(item) + "' is not of the form a>b");
        arcs.emplace_back(parse_int(item.substr(0, gt), "arc tail"),
                          parse_int(item.substr(gt + 1), "arc head"));
      }
    } else {
      fail("pattern literal: unknown field '" + std::string(key) + "'");
    }
  }
  if (k < 0) fail("pattern literal: missing k");
  if (!saw_arcs && k > 1) fail("pattern literal: missing arcs");
  return MotifPattern(k, arcs);
}

std::vector<std::pair<int, int>> MotifPattern::arcs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j)
      if (adjacency_ & arc_bit(k_, i, j)) out.emplace_back(i, j);
  return out;
}

std::size_t MotifPattern::arc_count() const noexcept {
  return static_cast<std::size_t>(std::popcount(adjacency_));
}

std::string MotifPattern::to_literal() const {
  std::string s = "k=" + std::to_string(k_) + "; arcs=";
  bool first = true;
  for (auto [a, b] : arcs()) {
    if (!first) s += ',';
    s += std::to_string(a) + ">" + std::to_string(b);
    first = false;
  }
  return s;
}

std::vector<MotifPattern> all_weakly_connected_patterns(int k) {
  if (k < 1 || k > 4) fail("pattern catalogue is limited to k <= 4");
  std::vector<int> slots;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) slots.push_back(i * k + j);
  std::map<std::string, AdjacencyBits> classes;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    AdjacencyBits adj = 0;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1U) adj |= AdjacencyBits{1} << slots[s];
    if (!weakly_connected(k, adj)) continue;
    classes.emplace(canonical_code(k, adj), adj);
  }
  std::vector<MotifPattern> out;
  out.reserve(classes.size());
  for (const auto& [code, adj] : classes) out.push_back(MotifPattern::from_bits(k, adj));
  return out;
}

}  // namespace rgd
