#include "qtrotor/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qtrotor/errors.hpp"
#include "qtrotor/parallel.hpp"

namespace qtr {

namespace {

constexpr double kComThreshold = 0.99;
constexpr double kShapeThreshold = 0.9;
// A mode is "zero" below (1e-6 wz)^2.
constexpr double kZeroFraction = 1e-6;

std::vector<double> flatten(std::span<const Vec3> p) {
  std::vector<double> u(3 * p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (int a = 0; a < 3; ++a) u[3 * i + a] = p[i][a];
  return u;
}

void normalize(std::vector<double>& v) {
  const double n = norm(v);
  if (n > 0.0)
    for (double& x : v) x /= n;
}

}  // namespace

std::string to_string(ModeLabel label) {
  switch (label) {
    case ModeLabel::rotational: return "rotational";
    case ModeLabel::zigzag: return "zigzag";
    case ModeLabel::com_x: return "com_x";
    case ModeLabel::com_y: return "com_y";
    case ModeLabel::com_z: return "com_z";
    case ModeLabel::other: return "other";
  }
  return "other";
}

int ModeSpectrum::index_of(ModeLabel label) const {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == label) return static_cast<int>(k);
  return -1;
}

double ModeSpectrum::frequency_of(ModeLabel label) const {
  const int k = index_of(label);
  return k < 0 ? std::numeric_limits<double>::quiet_NaN() : frequencies[k];
}

Matrix hessian(const IonCrystal& crystal) {
  const auto& trap = crystal.trap;
  const double l = trap.length_unit();
  auto u = flatten(crystal.positions);
  for (double& x : u) x /= l;
  for (std::size_t i = 0; i < crystal.positions.size(); ++i)
    for (std::size_t j = i + 1; j < crystal.positions.size(); ++j)
      if (crystal.positions[i] == crystal.positions[j])
        throw SingularConfiguration("hessian: coincident ions");
  const double unit = trap.ion_mass * trap.omega_z * trap.omega_z;
  return unit * reduced::hessian(u, trap.stiffness());
}

std::vector<double> com_pattern(int n_ions, int axis) {
  std::vector<double> v(3 * n_ions, 0.0);
  for (int i = 0; i < n_ions; ++i) v[3 * i + axis] = 1.0;
  normalize(v);
  return v;
}

std::vector<double> rotation_pattern(const IonCrystal& crystal) {
  const auto c = centroid(crystal.positions);
  std::vector<double> v(3 * crystal.positions.size(), 0.0);
  for (std::size_t i = 0; i < crystal.positions.size(); ++i) {
    const double x = crystal.positions[i][0] - c[0];
    const double z = crystal.positions[i][2] - c[2];
    // d/dphi of the rotation x -> x cos - z sin, z -> x sin + z cos.
    v[3 * i + 0] = -z;
    v[3 * i + 2] = x;
  }
  normalize(v);
  return v;
}

std::vector<double> zigzag_pattern(const IonCrystal& crystal) {
  const std::size_t n = crystal.positions.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return crystal.positions[a][2] < crystal.positions[b][2];
  });
  std::vector<double> v(3 * n, 0.0);
  double mean = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = (k % 2 == 0) ? 1.0 : -1.0;
    v[3 * order[k]] = s;
    mean += s;
  }
  mean /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) v[3 * i] -= mean;
  normalize(v);
  return v;
}

void classify_modes(ModeSpectrum& spectrum, const IonCrystal& crystal) {
  const std::size_t m = spectrum.frequencies.size();
  const int n = static_cast<int>(crystal.positions.size());
  spectrum.labels.assign(m, ModeLabel::other);

  struct Template {
    ModeLabel label;
    std::vector<double> pattern;
    double threshold;
  };
  std::vector<Template> templates = {
      {ModeLabel::com_x, com_pattern(n, 0), kComThreshold},
      {ModeLabel::com_y, com_pattern(n, 1), kComThreshold},
      {ModeLabel::com_z, com_pattern(n, 2), kComThreshold},
  };
  if (n > 1) {
    templates.push_back({ModeLabel::rotational, rotation_pattern(crystal), kShapeThreshold});
    templates.push_back({ModeLabel::zigzag, zigzag_pattern(crystal), kShapeThreshold});
  }

  // Greedy assignment in order of decreasing overlap so that ties go to the
  // strongest match.
  struct Candidate {
    double overlap;
    std::size_t t;
    std::size_t k;
  };
  std::vector<Candidate> cands;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    if (norm(templates[t].pattern) == 0.0) continue;
    for (std::size_t k = 0; k < m; ++k) {
      const double ov = std::abs(dot(templates[t].pattern, spectrum.vectors.column(k)));
      if (ov >= templates[t].threshold) cands.push_back({ov, t, k});
    }
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.overlap > b.overlap; });
  std::vector<bool> used_t(templates.size(), false);
  std::vector<bool> used_k(m, false);
  for (const auto& c : cands) {
    if (used_t[c.t] || used_k[c.k]) continue;
    used_t[c.t] = used_k[c.k] = true;
    spectrum.labels[c.k] = templates[c.t].label;
  }
}

ModeSpectrum normal_modes(const IonCrystal& crystal) {
  const auto& trap = crystal.trap;
  const Matrix h = hessian(crystal);
  const Matrix scaled = (1.0 / trap.ion_mass) * h;
  const auto eig = jacobi_eigen(scaled);

  ModeSpectrum s;
  s.eigenvalues = eig.values;
  s.vectors = eig.vectors;
  const double zero = (kZeroFraction * trap.omega_z) * (kZeroFraction * trap.omega_z);
  const double hnorm = scaled.frobenius_norm();
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    const double lambda = eig.values[k];
    if (lambda < -zero) s.stable = false;
    s.frequencies.push_back(lambda >= 0.0 ? std::sqrt(lambda) : -std::sqrt(-lambda));
    const auto v = eig.vectors.column(k);
    auto hv = scaled * std::span<const double>(v);
    for (std::size_t i = 0; i < hv.size(); ++i) hv[i] -= lambda * v[i];
    s.max_residual = std::max(s.max_residual, norm(hv) / hnorm);
  }
  classify_modes(s, crystal);
  return s;
}

namespace {

SweepRow solve_point(const TrapConfig& base, double omega_x, const std::optional<IonCrystal>& seed) {
  TrapConfig t = base;
  t.omega_x = omega_x;
  SweepRow row;
  row.omega_x = omega_x;
  row.crystal = seed ? find_equilibrium(t, seed->positions) : find_equilibrium(t);
  row.spectrum = normal_modes(row.crystal);
  return row;
}

// Reflections x, y, z -> -x, -y, -z and ion relabelling are symmetries of
// the trap. Apply the combination that brings `row` closest to `prev`, so
// displacement vectors of neighbouring rows are comparable.
void align_row(const SweepRow& prev, SweepRow& row) {
  const auto& a = prev.crystal.positions;
  auto& b = row.crystal.positions;
  const int n = static_cast<int>(a.size());
  if (static_cast<int>(b.size()) != n) return;
  const auto ca = centroid(a);
  const auto cb = centroid(b);

  std::vector<int> best_perm(n);
  std::iota(best_perm.begin(), best_perm.end(), 0);
  Vec3 best_sign{1.0, 1.0, 1.0};
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < 8; ++mask) {
    const Vec3 sign{mask & 1 ? -1.0 : 1.0, mask & 2 ? -1.0 : 1.0, mask & 4 ? -1.0 : 1.0};
    auto dist2 = [&](int i, int j) {
      double d = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double x = (a[i][k] - ca[k]) - sign[k] * (b[j][k] - cb[k]);
        d += x * x;
      }
      return d;
    };
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    if (n <= 7) {
      do {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += dist2(i, perm[i]);
        if (d < best) {
          best = d;
          best_perm = perm;
          best_sign = sign;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
      // Greedy nearest assignment for larger crystals.
      std::vector<bool> used(n, false);
      double d = 0.0;
      for (int i = 0; i < n; ++i) {
        int pick = -1;
        for (int j = 0; j < n; ++j)
          if (!used[j] && (pick < 0 || dist2(i, j) < dist2(i, pick))) pick = j;
        used[pick] = true;
        perm[i] = pick;
        d += dist2(i, pick);
      }
      if (d < best) {
        best = d;
        best_perm = perm;
        best_sign = sign;
      }
    }
  }

  std::vector<Vec3> moved(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) moved[i][k] = cb[k] + best_sign[k] * (b[best_perm[i]][k] - cb[k]);
  b = moved;
  Matrix v = row.spectrum.vectors;
  for (std::size_t col = 0; col < v.cols(); ++col)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 3; ++k) v(3 * i + k, col) = best_sign[k] * row.spectrum.vectors(3 * best_perm[i] + k, col);
  row.spectrum.vectors = v;
}

// perm[k] = index in `cur` of the mode continuing track k of `prev`.
// Labelled modes follow their label; the rest go by eigenvector overlap.
std::vector<std::size_t> match_modes(const ModeSpectrum& prev, const std::vector<std::size_t>& prev_perm,
                                     const ModeSpectrum& cur) {
  const std::size_t m = prev_perm.size();
  std::vector<std::size_t> perm(m, m);
  std::vector<bool> taken(m, false);
  for (std::size_t t = 0; t < m; ++t) {
    const auto label = prev.labels[prev_perm[t]];
    if (label == ModeLabel::other) continue;
    const int k = cur.index_of(label);
    if (k < 0 || taken[k]) continue;
    perm[t] = static_cast<std::size_t>(k);
    taken[k] = true;
  }

  struct Pair {
    double overlap;
    std::size_t track;
    std::size_t k;
  };
  std::vector<Pair> pairs;
  for (std::size_t t = 0; t < m; ++t) {
    if (perm[t] != m) continue;
    const auto pv = prev.vectors.column(prev_perm[t]);
    for (std::size_t k = 0; k < m; ++k)
      if (!taken[k]) pairs.push_back({std::abs(dot(pv, cur.vectors.column(k))), t, k});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.overlap > b.overlap; });
  for (const auto& p : pairs) {
    if (perm[p.track] != m || taken[p.k]) continue;
    perm[p.track] = p.k;
    taken[p.k] = true;
  }
  return perm;
}

bool needs_refinement(const SweepRow& a, const SweepRow& b, double threshold) {
  for (std::size_t k = 0; k < a.tracked.size(); ++k) {
    const double fa = a.tracked[k];
    const double fb = b.tracked[k];
    const double scale = std::max(std::abs(fa), std::abs(fb));
    if (scale == 0.0) continue;
    if (std::abs(fa - fb) > threshold * scale) return true;
  }
  return false;
}

}  // namespace

SweepTable sweep_confinement(const TrapConfig& base, double omega_x_lo, double omega_x_hi, int steps,
                             const SweepOptions& options) {
  base.validate();
  if (!(omega_x_lo > 0.0 && omega_x_hi >= omega_x_lo))
    throw InvalidArgument("sweep_confinement: invalid omega_x range");
  // A single point is allowed only for a collapsed range.
  if (steps < 1 || (steps == 1 && omega_x_hi != omega_x_lo))
    throw InvalidArgument("sweep_confinement: steps must be >= 2");

  std::vector<double> grid(steps, omega_x_lo);
  for (int i = 1; i < steps; ++i)
    grid[i] = omega_x_lo + (omega_x_hi - omega_x_lo) * i / (steps - 1);

  // Each grid point is solved independently (multi-start), then tracked.
  std::vector<SweepRow> rows = parallel_map(
      grid, [&](double wx) { return solve_point(base, wx, std::nullopt); }, options.jobs);

  const std::size_t m = rows.front().spectrum.frequencies.size();
  SweepTable table;
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  {
    int other = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto label = rows.front().spectrum.labels[k];
      table.names.push_back(label == ModeLabel::other ? "mode_" + std::to_string(other++) : to_string(label));
    }
  }

  auto fill = [&](SweepRow& row, const std::vector<std::size_t>& p) {
    row.tracked.resize(m);
    for (std::size_t t = 0; t < m; ++t) row.tracked[t] = row.spectrum.frequencies[p[t]];
  };

  std::vector<SweepRow> out;
  std::vector<std::size_t> cur_perm = perm;
  fill(rows.front(), cur_perm);
  out.push_back(rows.front());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    // Adaptive bisection of the interval (out.back(), rows[i]).
    std::vector<SweepRow> pending{rows[i]};
    int refinements = 0;
    while (!pending.empty()) {
      SweepRow next = pending.back();
      align_row(out.back(), next);
      const auto p = match_modes(out.back().spectrum, cur_perm, next.spectrum);
      fill(next, p);
      if (refinements < options.max_refinements &&
          needs_refinement(out.back(), next, options.refine_threshold) &&
          next.omega_x - out.back().omega_x > 1e-6 * base.omega_z) {
        ++refinements;
        const double mid = 0.5 * (out.back().omega_x + next.omega_x);
        pending.push_back(solve_point(base, mid, out.back().crystal));
        continue;
      }
      cur_perm = p;
      out.push_back(std::move(next));
      pending.pop_back();
    }
  }
  table.rows = std::move(out);
  return table;
}

double zigzag_critical_omega_x(const TrapConfig& base) {
  base.validate();
  if (base.n_ions < 3) throw InvalidArgument("zigzag needs at least three ions");
  const double l = base.length_unit();
  auto min_eigen = [&](double wx) {
    TrapConfig t = base;
    t.omega_x = wx;
    std::vector<Vec3> seed(t.n_ions, Vec3{0.0, 0.0, 0.0});
    for (int i = 0; i < t.n_ions; ++i) seed[i][2] = (i - 0.5 * (t.n_ions - 1)) * 1.2 * l;
    const auto chain = find_stationary(t, seed);
    // Smallest transverse-x eigenvalue of the chain Hessian.
    const auto h = hessian(chain);
    Matrix block(t.n_ions, t.n_ions);
    for (int i = 0; i < t.n_ions; ++i)
      for (int j = 0; j < t.n_ions; ++j) block(i, j) = h(3 * i, 3 * j);
    return jacobi_eigen(block).values.front();
  };
  double lo = base.omega_z;
  double hi = 4.0 * base.omega_z;
  if (min_eigen(lo) >= 0.0 || min_eigen(hi) <= 0.0)
    throw NumericalError("zigzag critical point not bracketed");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (min_eigen(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qtr
