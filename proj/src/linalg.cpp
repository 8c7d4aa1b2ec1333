#include "maxcons/linalg.hpp"

#include <algorithm>

namespace maxcons {

void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
  if (a.is_zero() || x.empty()) return;
  SparseVec r;
  r.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      r.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].first < y[i].first) {
      r.emplace_back(x[j].first, a * x[j].second);
      ++j;
    } else {
      Rational v = y[i].second + a * x[j].second;
      if (!v.is_zero()) r.emplace_back(y[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  y = std::move(r);
}

SparseVec make_sparse(std::vector<std::pair<std::uint32_t, Rational>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec r;
  for (auto& e : entries) {
    if (!r.empty() && r.back().first == e.first) {
      r.back().second += e.second;
    } else {
      if (!r.empty() && r.back().second.is_zero()) r.pop_back();
      r.push_back(std::move(e));
    }
  }
  if (!r.empty() && r.back().second.is_zero()) r.pop_back();
  return r;
}

SparseVec Echelon::reduce(SparseVec row) const {
  while (!row.empty()) {
    auto it = pivots_.find(row.front().first);
    if (it == pivots_.end()) break;
    Rational f = -row.front().second;
    axpy(row, f, it->second);
  }
  return row;
}

bool Echelon::insert(SparseVec row) {
  row = reduce(std::move(row));
  if (row.empty()) return false;
  Rational inv = row.front().second.inverse();
  for (auto& e : row) e.second *= inv;
  auto col = row.front().first;
  pivots_.emplace(col, std::move(row));
  return true;
}

std::optional<std::vector<Rational>> Echelon::solve(std::uint32_t nvars) const {
  if (pivots_.count(nvars)) return std::nullopt;
  std::vector<Rational> x(nvars);
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    if (it->first > nvars) continue;
    Rational v;
    for (std::size_t k = 1; k < it->second.size(); ++k) {
      const auto& [c, a] = it->second[k];
      if (c == nvars) {
        v += a;
      } else if (c < nvars) {
        v -= a * x[c];
      }
    }
    x[it->first] = v;
  }
  return x;
}

std::vector<std::vector<Rational>> Echelon::nullspace(std::uint32_t nvars) const {
  std::vector<std::vector<Rational>> basis;
  for (std::uint32_t f = 0; f < nvars; ++f) {
    if (pivots_.count(f)) continue;
    std::vector<Rational> x(nvars);
    x[f] = Rational(1);
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      if (it->first >= nvars) continue;
      Rational v;
      for (std::size_t k = 1; k < it->second.size(); ++k) {
        const auto& [c, a] = it->second[k];
        if (c < nvars) v -= a * x[c];
      }
      x[it->first] = v;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

SparseVec ColumnIndex::flatten(const std::vector<Poly>& comps) {
  std::vector<std::pair<std::uint32_t, Rational>> entries;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (const auto& t : comps[c].terms()) {
      auto it = ids_.find(t.m);
      if (it == ids_.end()) it = ids_.emplace(t.m, static_cast<std::uint32_t>(ids_.size())).first;
      for (int k = 0; k < 4; ++k) {
        if (t.c.part(k).is_zero()) continue;
        auto col = (it->second * static_cast<std::uint32_t>(ncomp_) + static_cast<std::uint32_t>(c)) * 4u +
                   static_cast<std::uint32_t>(k);
        entries.emplace_back(col, t.c.part(k));
      }
    }
  }
  return make_sparse(std::move(entries));
}

std::size_t rank_mod_p(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p) {
  auto mul = [p](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
  };
  auto inv = [&](std::uint64_t a) {
    std::uint64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  };
  if (rows.empty()) return 0;
  std::size_t ncols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < ncols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    std::uint64_t iv = inv(rows[rank][c]);
    for (std::size_t k = c; k < ncols; ++k) rows[rank][k] = mul(rows[rank][k], iv);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      std::uint64_t f = rows[r][c];
      if (f == 0) continue;
      for (std::size_t k = c; k < ncols; ++k) {
        std::uint64_t s = mul(f, rows[rank][k]);
        rows[r][k] = rows[r][k] >= s ? rows[r][k] - s : rows[r][k] + p - s;
      }
    }
    ++rank;
  }
  return rank;
}

std::size_t rank_rational(const std::vector<std::vector<Rational>>& rows) {
  Echelon e;
  for (const auto& row : rows) {
    SparseVec v;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!row[k].is_zero()) v.emplace_back(static_cast<std::uint32_t>(k), row[k]);
    }
    e.insert(std::move(v));
  }
  return e.rank();
}

}  // namespace maxcons
