// Numerical maximization of the secrecy objective I(V;Y) - I(V;Z) over
// input distributions, prefixed inputs, and the weighted rate objective of
// the confidential-broadcast region. Derivative-free: a deterministic
// simplex grid for coverage plus pairwise mass-transfer polish from the
// best grid points and seeded random restarts.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "effsec/core.hpp"
#include "effsec/info.hpp"
#include "effsec/prob.hpp"

namespace effsec {

// Auxiliary input: V ~ q_v fed through an artificial prefix channel
// Q_{X|V}. The chain V - X - YZ holds by construction.
struct PrefixedInput {
  Pmf q_v;
  Dmc prefix;
};

// Broadcast-region input: U ~ q_u, V | U through cond_v, X | V through
// prefix; chain U - V - X - YZ by construction.
struct BccInput {
  Pmf q_u;
  Dmc cond_v;
  Dmc prefix;
};

struct OptimTrace {
  int restart;        // start index in deterministic order
  double value_bits;  // converged objective at that start
};

struct CapacityResult {
  BitsValue value;     // clamped at 0
  PrefixedInput argmax;
  double objective_bits;  // unclamped objective at argmax
  std::vector<OptimTrace> trace;
};

struct SearchOptions {
  int grid_resolution = 20;
  int restarts = 16;
  std::uint64_t seed = 1;
  int polish_starts = 10;          // grid points kept for local polish
  std::uint64_t grid_budget = 200000;  // joint grid evaluations allowed
};

inline BitsValue secrecy_objective(const PrefixedInput& inp, const WiretapChannel& ch) {
  if (inp.prefix.output() != ch.input()) {
    throw DimensionError("secrecy_objective: prefix output does not match channel input");
  }
  if (inp.q_v.alphabet() != inp.prefix.input()) {
    throw DimensionError("secrecy_objective: q_v alphabet does not match prefix input");
  }
  WiretapChannel composed = compose_prefix(inp.prefix, ch);
  double iy = mutual_information(inp.q_v, composed.y_channel()).bits;
  double iz = mutual_information(inp.q_v, composed.z_channel()).bits;
  return BitsValue::finite(iy - iz);
}

namespace detail {

// Parameter vectors are concatenated pmfs ("blocks"); every candidate
// stays exactly on the product of simplices.
struct BlockLayout {
  std::vector<std::size_t> sizes;
  std::size_t total() const {
    std::size_t t = 0;
    for (auto s : sizes) t += s;
    return t;
  }
};

using Objective = std::function<double(std::span<const double>)>;

inline std::uint64_t compositions_count(int total, std::size_t parts) {
  // C(total + parts - 1, parts - 1), saturating.
  std::uint64_t num = 1;
  for (std::size_t i = 1; i < parts; ++i) {
    num = num * (static_cast<std::uint64_t>(total) + i) / i;
    if (num > (std::uint64_t{1} << 62)) return num;
  }
  return num;
}

template <typename Fn>
void for_each_composition(int total, std::size_t parts, std::vector<int>& scratch,
                          std::size_t at, Fn&& fn) {
  if (at + 1 == parts) {
    scratch[at] = total;
    fn(scratch);
    return;
  }
  for (int take = 0; take <= total; ++take) {
    scratch[at] = take;
    for_each_composition(total - take, parts, scratch, at + 1, fn);
  }
}

// Enumerates the joint grid over all blocks at per-coordinate resolution
// 1/g, invoking fn on each full parameter vector.
template <typename Fn>
void for_each_grid_point(const BlockLayout& layout, int g, std::vector<double>& x,
                         std::size_t block, std::size_t offset, Fn&& fn) {
  if (block == layout.sizes.size()) {
    fn(x);
    return;
  }
  std::size_t k = layout.sizes[block];
  std::vector<int> scratch(k);
  for_each_composition(g, k, scratch, 0, [&](const std::vector<int>& comp) {
    for (std::size_t i = 0; i < k; ++i) {
      x[offset + i] = static_cast<double>(comp[i]) / static_cast<double>(g);
    }
    for_each_grid_point(layout, g, x, block + 1, offset + k, fn);
  });
}

inline void random_simplex_point(Rng& rng, std::span<double> out) {
  double sum = 0.0;
  for (double& v : out) {
    double u = rng.next_unit();
    v = -std::log(1.0 - u);
    sum += v;
  }
  for (double& v : out) v /= sum;
}

// Hill climb by moving probability mass between coordinates of one block
// at a time, halving the step when no transfer improves the objective.
inline double polish(const Objective& f, const BlockLayout& layout, std::vector<double>& x,
                     double initial_step) {
  double best = f(x);
  double step = initial_step;
  std::vector<double> cand;
  while (step > 1e-9) {
    bool improved = true;
    int sweeps = 0;
    while (improved && sweeps < 200) {
      improved = false;
      ++sweeps;
      std::size_t offset = 0;
      for (std::size_t b = 0; b < layout.sizes.size(); ++b) {
        std::size_t k = layout.sizes[b];
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            // accepted moves shrink x[offset + i]; recompute the transfer
            if (x[offset + i] <= 0.0) break;
            double t = std::min(step, x[offset + i]);
            cand = x;
            cand[offset + i] -= t;
            cand[offset + j] += t;
            double v = f(cand);
            if (v > best + 1e-15) {
              best = v;
              x.swap(cand);
              improved = true;
            }
          }
        }
        offset += k;
      }
    }
    step *= 0.5;
  }
  return best;
}

struct SearchOutcome {
  std::vector<double> argmax;
  double value = 0.0;
  std::vector<OptimTrace> trace;
};

// Full search: budgeted joint grid, polish from the best grid points,
// polish from seeded random restarts, and optional caller warm starts.
// Ties keep the earliest start in the deterministic order.
inline SearchOutcome search(const Objective& f, const BlockLayout& layout,
                            const SearchOptions& opt,
                            const std::vector<std::vector<double>>& warm_starts) {
  int g = std::max(1, opt.grid_resolution);
  while (g > 1) {
    std::uint64_t total = 1;
    for (auto k : layout.sizes) {
      std::uint64_t c = compositions_count(g, k);
      if (total > opt.grid_budget / std::max<std::uint64_t>(c, 1)) {
        total = opt.grid_budget + 1;
        break;
      }
      total *= c;
    }
    if (total <= opt.grid_budget) break;
    --g;
  }

  struct Scored {
    double value;
    std::vector<double> x;
  };
  std::vector<Scored> top;
  std::vector<double> point(layout.total());
  for_each_grid_point(layout, g, point, 0, 0, [&](const std::vector<double>& x) {
    double v = f(x);
    if (top.size() < static_cast<std::size_t>(opt.polish_starts)) {
      top.push_back({v, x});
      std::sort(top.begin(), top.end(),
                [](const Scored& a, const Scored& b) { return a.value > b.value; });
    } else if (v > top.back().value) {
      top.back() = {v, x};
      std::sort(top.begin(), top.end(),
                [](const Scored& a, const Scored& b) { return a.value > b.value; });
    }
  });

  SearchOutcome out;
  double best = -std::numeric_limits<double>::infinity();
  int start_index = 0;
  auto run_start = [&](std::vector<double> x) {
    double v = polish(f, layout, x, 1.0 / static_cast<double>(g));
    out.trace.push_back({start_index, v});
    if (v > best + 1e-15) {
      best = v;
      out.argmax = std::move(x);
    }
    ++start_index;
  };

  for (const auto& w : warm_starts) run_start(w);
  for (const auto& s : top) run_start(s.x);
  for (int r = 0; r < opt.restarts; ++r) {
    Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(r)));
    std::vector<double> x(layout.total());
    std::size_t offset = 0;
    for (auto k : layout.sizes) {
      random_simplex_point(rng, {x.data() + offset, k});
      offset += k;
    }
    run_start(std::move(x));
  }
  out.value = best;
  return out;
}

// I(input;output) from an input law and a row-major transition matrix,
// on raw buffers; the optimizer's hot path.
inline double mi_raw(std::span<const double> q, const std::vector<double>& rows,
                     std::size_t out_size, std::vector<double>& out_scratch) {
  out_scratch.assign(out_size, 0.0);
  double cond = 0.0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (q[x] == 0.0) continue;
    const double* row = rows.data() + x * out_size;
    double h = 0.0;
    for (std::size_t y = 0; y < out_size; ++y) {
      out_scratch[y] += q[x] * row[y];
      if (row[y] > 0.0) h -= row[y] * std::log2(row[y]);
    }
    cond += q[x] * h;
  }
  double hout = 0.0;
  for (double p : out_scratch) {
    if (p > 0.0) hout -= p * std::log2(p);
  }
  return hout - cond;
}

inline std::vector<double> flatten_rows(const Dmc& ch) {
  std::vector<double> rows(ch.input_size() * ch.output_size());
  for (std::size_t x = 0; x < ch.input_size(); ++x) {
    auto r = ch.row(x);
    std::copy(r.begin(), r.end(), rows.begin() + static_cast<std::ptrdiff_t>(x * r.size()));
  }
  return rows;
}

inline Dmc rows_to_dmc(const Alphabet& in, const Alphabet& out,
                       std::span<const double> flat) {
  std::vector<std::vector<double>> rows(in.size());
  for (std::size_t v = 0; v < in.size(); ++v) {
    rows[v].assign(flat.begin() + static_cast<std::ptrdiff_t>(v * out.size()),
                   flat.begin() + static_cast<std::ptrdiff_t>((v + 1) * out.size()));
  }
  return Dmc(in, out, std::move(rows));
}

}  // namespace detail

// Max over Q_X of I(X;Y) - I(X;Z); the V = X special case.
inline CapacityResult maximize_direct(const WiretapChannel& ch,
                                      const SearchOptions& opt = {}) {
  const std::size_t k = ch.input_size();
  const auto y_rows = detail::flatten_rows(ch.y_channel());
  const auto z_rows = detail::flatten_rows(ch.z_channel());
  const std::size_t ny = ch.y_alphabet().size();
  const std::size_t nz = ch.z_alphabet().size();

  std::vector<double> sy, sz;
  detail::Objective f = [&](std::span<const double> q) {
    return detail::mi_raw(q, y_rows, ny, sy) - detail::mi_raw(q, z_rows, nz, sz);
  };

  detail::BlockLayout layout{{k}};
  std::vector<std::vector<double>> warm{std::vector<double>(k, 1.0 / static_cast<double>(k))};
  auto outcome = detail::search(f, layout, opt, warm);

  Pmf q(ch.input(), outcome.argmax);
  PrefixedInput argmax{q, Dmc::identity(ch.input())};
  double clamped = outcome.value < 0.0 ? 0.0 : outcome.value;
  return CapacityResult{BitsValue::finite(clamped), argmax, outcome.value,
                        std::move(outcome.trace)};
}

// Max over (q_v, prefix) of I(V;Y) - I(V;Z) with |V| = v_size <= |X|.
inline CapacityResult maximize_prefixed(const WiretapChannel& ch, std::size_t v_size,
                                        const SearchOptions& opt = {}) {
  const std::size_t x_size = ch.input_size();
  if (v_size < 1 || v_size > x_size) {
    throw DomainError("maximize_prefixed: |V| must lie in [1, |X|]; got " +
                      std::to_string(v_size));
  }
  const auto y_rows = detail::flatten_rows(ch.y_channel());
  const auto z_rows = detail::flatten_rows(ch.z_channel());
  const std::size_t ny = ch.y_alphabet().size();
  const std::size_t nz = ch.z_alphabet().size();

  // Parameters: q_v, then the v_size prefix rows.
  detail::BlockLayout layout;
  layout.sizes.assign(1 + v_size, x_size);
  layout.sizes[0] = v_size;

  std::vector<double> vy(v_size * ny), vz(v_size * nz), sy, sz;
  detail::Objective f = [&](std::span<const double> p) {
    std::span<const double> q_v{p.data(), v_size};
    const double* prefix = p.data() + v_size;
    for (std::size_t v = 0; v < v_size; ++v) {
      for (std::size_t y = 0; y < ny; ++y) vy[v * ny + y] = 0.0;
      for (std::size_t z = 0; z < nz; ++z) vz[v * nz + z] = 0.0;
      for (std::size_t x = 0; x < x_size; ++x) {
        double w = prefix[v * x_size + x];
        if (w == 0.0) continue;
        for (std::size_t y = 0; y < ny; ++y) vy[v * ny + y] += w * y_rows[x * ny + y];
        for (std::size_t z = 0; z < nz; ++z) vz[v * nz + z] += w * z_rows[x * nz + z];
      }
    }
    return detail::mi_raw(q_v, vy, ny, sy) - detail::mi_raw(q_v, vz, nz, sz);
  };

  std::vector<std::vector<double>> warm;
  if (v_size == x_size) {
    // The identity prefix embeds the direct problem, so V = X starts keep
    // the prefixed maximum from falling below the direct one.
    CapacityResult direct = maximize_direct(ch, opt);
    std::vector<double> identity(x_size * x_size, 0.0);
    for (std::size_t i = 0; i < x_size; ++i) identity[i * x_size + i] = 1.0;
    std::vector<double> w0(v_size, 1.0 / static_cast<double>(v_size));
    w0.insert(w0.end(), identity.begin(), identity.end());
    warm.push_back(w0);
    std::vector<double> w1(direct.argmax.q_v.probs().begin(),
                           direct.argmax.q_v.probs().end());
    w1.insert(w1.end(), identity.begin(), identity.end());
    warm.push_back(std::move(w1));
  }

  auto outcome = detail::search(f, layout, opt, warm);

  Alphabet v_alpha = Alphabet::indexed(v_size, "v");
  Pmf q_v(v_alpha, std::vector<double>(outcome.argmax.begin(),
                                       outcome.argmax.begin() + static_cast<std::ptrdiff_t>(v_size)));
  Dmc prefix = detail::rows_to_dmc(
      v_alpha, ch.input(),
      {outcome.argmax.data() + v_size, v_size * x_size});
  double clamped = outcome.value < 0.0 ? 0.0 : outcome.value;
  return CapacityResult{BitsValue::finite(clamped), PrefixedInput{q_v, prefix},
                        outcome.value, std::move(outcome.trace)};
}

struct BccSizes {
  std::size_t u_size;
  std::size_t v_size;
};

struct BccPoint {
  BitsValue r0;
  BitsValue r;
  BccInput argmax;
  double weighted_value;  // lambda * R0 + R at the argmax
};

// One boundary point of the confidential-broadcast rate region:
// maximizes lambda * min{I(U;Y), I(U;Z)} + max(0, I(V;Y|U) - I(V;Z|U)).
inline BccPoint bcc_boundary(const WiretapChannel& ch, double lambda, BccSizes sizes,
                             const SearchOptions& opt = {}) {
  const std::size_t x_size = ch.input_size();
  if (lambda < 0.0) throw DomainError("bcc_boundary: lambda must be nonnegative");
  if (sizes.u_size < 1 || sizes.u_size > x_size + 3) {
    throw DomainError("bcc_boundary: |U| must lie in [1, |X|+3]; got " +
                      std::to_string(sizes.u_size));
  }
  const std::size_t v_cap = x_size * x_size + 4 * x_size + 3;
  if (sizes.v_size < 1 || sizes.v_size > v_cap) {
    throw DomainError("bcc_boundary: |V| must lie in [1, |X|^2+4|X|+3]; got " +
                      std::to_string(sizes.v_size));
  }
  const std::size_t nu = sizes.u_size;
  const std::size_t nv = sizes.v_size;
  const auto y_rows = detail::flatten_rows(ch.y_channel());
  const auto z_rows = detail::flatten_rows(ch.z_channel());
  const std::size_t ny = ch.y_alphabet().size();
  const std::size_t nz = ch.z_alphabet().size();

  // Parameters: q_u, the nu rows of V|U, the nv rows of X|V.
  detail::BlockLayout layout;
  layout.sizes.push_back(nu);
  for (std::size_t u = 0; u < nu; ++u) layout.sizes.push_back(nv);
  for (std::size_t v = 0; v < nv; ++v) layout.sizes.push_back(x_size);

  std::vector<double> vy(nv * ny), vz(nv * nz), uy(nu * ny), uz(nu * nz), sy, sz;
  auto eval_parts = [&](std::span<const double> p, double& r0, double& r) {
    std::span<const double> q_u{p.data(), nu};
    const double* cond = p.data() + nu;
    const double* prefix = cond + nu * nv;
    for (std::size_t v = 0; v < nv; ++v) {
      for (std::size_t y = 0; y < ny; ++y) vy[v * ny + y] = 0.0;
      for (std::size_t z = 0; z < nz; ++z) vz[v * nz + z] = 0.0;
      for (std::size_t x = 0; x < x_size; ++x) {
        double w = prefix[v * x_size + x];
        if (w == 0.0) continue;
        for (std::size_t y = 0; y < ny; ++y) vy[v * ny + y] += w * y_rows[x * ny + y];
        for (std::size_t z = 0; z < nz; ++z) vz[v * nz + z] += w * z_rows[x * nz + z];
      }
    }
    double cmi_y = 0.0, cmi_z = 0.0;
    for (std::size_t u = 0; u < nu; ++u) {
      std::span<const double> row{cond + u * nv, nv};
      for (std::size_t y = 0; y < ny; ++y) uy[u * ny + y] = 0.0;
      for (std::size_t z = 0; z < nz; ++z) uz[u * nz + z] = 0.0;
      for (std::size_t v = 0; v < nv; ++v) {
        if (row[v] == 0.0) continue;
        for (std::size_t y = 0; y < ny; ++y) uy[u * ny + y] += row[v] * vy[v * ny + y];
        for (std::size_t z = 0; z < nz; ++z) uz[u * nz + z] += row[v] * vz[v * nz + z];
      }
      if (q_u[u] > 0.0) {
        cmi_y += q_u[u] * detail::mi_raw(row, vy, ny, sy);
        cmi_z += q_u[u] * detail::mi_raw(row, vz, nz, sz);
      }
    }
    double iuy = detail::mi_raw(q_u, uy, ny, sy);
    double iuz = detail::mi_raw(q_u, uz, nz, sz);
    r0 = std::min(iuy, iuz);
    double diff = cmi_y - cmi_z;
    r = diff < 0.0 ? 0.0 : diff;
  };
  detail::Objective f = [&](std::span<const double> p) {
    double r0, r;
    eval_parts(p, r0, r);
    return lambda * r0 + r;
  };

  // Warm starts: a constant U carrying the single-message optimum, and a
  // fully informative U = V = X layout when shapes allow it.
  std::vector<std::vector<double>> warm;
  if (nv <= x_size) {
    CapacityResult thm1 = maximize_prefixed(ch, nv, opt);
    std::vector<double> w;
    w.assign(nu, 0.0);
    w[0] = 1.0;
    for (std::size_t u = 0; u < nu; ++u) {
      w.insert(w.end(), thm1.argmax.q_v.probs().begin(), thm1.argmax.q_v.probs().end());
    }
    for (std::size_t v = 0; v < nv; ++v) {
      auto row = thm1.argmax.prefix.row(v);
      w.insert(w.end(), row.begin(), row.end());
    }
    warm.push_back(std::move(w));
  }
  if (nu == x_size && nv == x_size) {
    std::vector<double> w(nu, 1.0 / static_cast<double>(nu));
    for (std::size_t u = 0; u < nu; ++u) {
      for (std::size_t v = 0; v < nv; ++v) w.push_back(u == v ? 1.0 : 0.0);
    }
    for (std::size_t v = 0; v < nv; ++v) {
      for (std::size_t x = 0; x < x_size; ++x) w.push_back(v == x ? 1.0 : 0.0);
    }
    warm.push_back(std::move(w));
  }

  auto outcome = detail::search(f, layout, opt, warm);

  double r0, r;
  eval_parts(outcome.argmax, r0, r);
  Alphabet u_alpha = Alphabet::indexed(nu, "u");
  Alphabet v_alpha = Alphabet::indexed(nv, "v");
  Pmf q_u(u_alpha, std::vector<double>(outcome.argmax.begin(),
                                       outcome.argmax.begin() + static_cast<std::ptrdiff_t>(nu)));
  Dmc cond_v = detail::rows_to_dmc(u_alpha, v_alpha,
                                   {outcome.argmax.data() + nu, nu * nv});
  Dmc prefix = detail::rows_to_dmc(v_alpha, ch.input(),
                                   {outcome.argmax.data() + nu + nu * nv, nv * x_size});
  return BccPoint{BitsValue::finite(r0), BitsValue::finite(r),
                  BccInput{q_u, cond_v, prefix}, outcome.value};
}

}  // namespace effsec
