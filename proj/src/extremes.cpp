#include "sgx/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <limits>

#include "sgx/errors.hpp"

namespace sgx::extremes {

double centering(double epsilon) {
  if (!(epsilon > 0.0) || epsilon >= std::exp(-1.0))
    throw ConfigError("centering: requires 0 < epsilon < 1/e");
  double L = std::log(1.0 / epsilon);
  return (2.0 * L - 0.75 * std::log(L)) / std::sqrt(2.0 * M_PI);
}

double default_extraction_radius(double epsilon) {
  double L = std::log(1.0 / epsilon);
  return epsilon * L * L;
}

namespace {

// cyclic sliding max with half-width w over each row of src (by rows if
// by_rows, with src interpreted row-major n x n)
void sliding_row_max(const Eigen::ArrayXd& src, int n, int w, Eigen::ArrayXd& dst) {
  if (2 * w + 1 >= n) {
    for (int i = 0; i < n; ++i) {
      double m = src[i * n];
      for (int j = 1; j < n; ++j) m = std::max(m, src[i * n + j]);
      for (int j = 0; j < n; ++j) dst[i * n + j] = m;
    }
    return;
  }
  const int len = n + 2 * w;
  std::vector<double> ext(len);
  std::vector<int> dq(len);
  for (int i = 0; i < n; ++i) {
    const double* row = src.data() + i * n;
    // ext[t] = row[(t - w) mod n] without per-element modulo
    for (int t = 0; t < w; ++t) ext[t] = row[n - w + t];
    for (int t = 0; t < n; ++t) ext[w + t] = row[t];
    for (int t = 0; t < w; ++t) ext[w + n + t] = row[t];
    int head = 0, tail = 0;  // dq[head..tail) holds candidate indices
    for (int t = 0; t < len; ++t) {
      while (tail > head && ext[dq[tail - 1]] <= ext[t]) --tail;
      dq[tail++] = t;
      int j = t - 2 * w;  // window [j, j+2w] centred at column j
      if (j >= 0) {
        while (dq[head] < j) ++head;
        dst[i * n + j] = ext[dq[head]];
      }
    }
  }
}

}  // namespace

std::vector<int> local_maxima(const Field& phi, double r) {
  const TorusLattice& lat = phi.lattice;
  const int n = lat.n();
  if (r < 0.0) throw ConfigError("local_maxima: r must be >= 0");

  // half-width of the disk's row segment at row offset a (min-image), or -1
  std::vector<int> width(n, -1);
  for (int a = 0; a < n; ++a) {
    if (!lat.offsets_in_ball(a, 0, r)) continue;
    int lo = 0, hi = n / 2;
    while (lo < hi) {  // largest b with (a,b) in the ball
      int mid = (lo + hi + 1) / 2;
      if (lat.offsets_in_ball(a, mid, r))
        lo = mid;
      else
        hi = mid - 1;
    }
    width[a] = lo;
  }

  // per distinct width, the cyclic row sliding max
  std::vector<int> widths;
  for (int a = 0; a < n; ++a)
    if (width[a] >= 0) widths.push_back(width[a]);
  std::sort(widths.begin(), widths.end());
  widths.erase(std::unique(widths.begin(), widths.end()), widths.end());

  std::vector<Eigen::ArrayXd> row_max(widths.size(), Eigen::ArrayXd(n * n));
  for (size_t wi = 0; wi < widths.size(); ++wi)
    sliding_row_max(phi.values, n, widths[wi], row_max[wi]);
  auto width_slot = [&](int w) {
    return std::lower_bound(widths.begin(), widths.end(), w) - widths.begin();
  };

  Eigen::ArrayXd disk_max = Eigen::ArrayXd::Constant(
      n * n, -std::numeric_limits<double>::infinity());
  for (int a = 0; a < n; ++a) {
    if (width[a] < 0) continue;
    const Eigen::ArrayXd& rm = row_max[width_slot(width[a])];
    for (int i = 0; i < n; ++i) {
      const int src_row = ((i + a) % n) * n, dst_row = i * n;
      for (int j = 0; j < n; ++j)
        disk_max[dst_row + j] = std::max(disk_max[dst_row + j], rm[src_row + j]);
    }
  }

  std::vector<int> candidates;
  for (int s = 0; s < n * n; ++s)
    if (phi.values[s] == disk_max[s]) candidates.push_back(s);

  // tie resolution: equal-valued candidates within r keep the first in
  // (value desc, index asc) order
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    if (phi.values[a] != phi.values[b]) return phi.values[a] > phi.values[b];
    return a < b;
  });
  std::vector<int> accepted;
  for (int c : candidates) {
    bool suppressed = false;
    for (int a : accepted) {
      if (lat.offsets_in_ball(lat.row(c) - lat.row(a), lat.col(c) - lat.col(a), r)) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

LevelSet level_set(const Field& phi, double lambda, double m_eps) {
  LevelSet out{lambda, {}};
  double threshold = m_eps - lambda;
  for (int s = 0; s < phi.size(); ++s)
    if (phi.values[s] >= threshold) out.sites.push_back(s);
  return out;
}

ExtremalProcessSample extremal_process(const Field& phi, double r) {
  const TorusLattice& lat = phi.lattice;
  ExtremalProcessSample sample;
  sample.r = r;
  sample.epsilon = lat.epsilon();
  sample.m_eps = centering(sample.epsilon);
  for (int s : local_maxima(phi, r)) {
    Eigen::Vector2d xy = lat.coords(s);
    sample.points.push_back({xy[0], xy[1], phi.values[s] - sample.m_eps});
  }
  return sample;
}

double oscillation(const Field& phi, const std::vector<int>& sites) {
  if (sites.empty()) throw ConfigError("oscillation: empty site set");
  double lo = phi.values[sites[0]], hi = lo;
  for (int s : sites) {
    lo = std::min(lo, phi.values[s]);
    hi = std::max(hi, phi.values[s]);
  }
  return hi - lo;
}

int argmax_map(const Field& phi, int site, double radius) {
  const TorusLattice& lat = phi.lattice;
  if (radius < 0.0) throw ConfigError("argmax_map: radius must be >= 0");
  int best = site;
  double best_val = phi.values[site];
  for (int s : ball(lat, site, radius)) {  // ascending index order
    if (phi.values[s] > best_val || (phi.values[s] == best_val && s < best)) {
      best = s;
      best_val = phi.values[s];
    }
  }
  return best;
}

long intermediate_pair_count(const TorusLattice& lat, const LevelSet& set, double r) {
  if (r < 1.0) throw ConfigError("intermediate_pair_count: r must be >= 1");
  double lo = lat.epsilon() * r, hi = 1.0 / r;
  double lo2 = lo * lo, hi2 = hi * hi;
  const int n = lat.n();
  long count = 0;
  for (size_t i = 0; i < set.sites.size(); ++i) {
    for (size_t j = i + 1; j < set.sites.size(); ++j) {
      int a = set.sites[i], b = set.sites[j];
      int di = lat.row(a) - lat.row(b), dj = lat.col(a) - lat.col(b);
      int ai = std::abs(di) % n, aj = std::abs(dj) % n;
      ai = std::min(ai, n - ai);
      aj = std::min(aj, n - aj);
      double d2 = (static_cast<double>(ai) * ai + static_cast<double>(aj) * aj) /
                  (static_cast<double>(n) * n);
      if (d2 > lo2 && d2 < hi2) ++count;
    }
  }
  return count;
}

}  // namespace sgx::extremes
