#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "penning/constants.hpp"

namespace penning::oracle {

using Big = boost::multiprecision::cpp_dec_float_50;

double energy_multiprecision(std::span<const Point> positions, const TrapConfig& trap) {
  const Big half_k = Big(0.5) * Big(trap.ion_mass) * Big(trap.axial_frequency) *
                     Big(trap.axial_frequency);
  const Big beta = Big(trap.rotation_frequency) *
                       (Big(trap.magnetic_field) * Big(trap.ion_charge) / Big(trap.ion_mass) -
                        Big(trap.rotation_frequency)) /
                       (Big(trap.axial_frequency) * Big(trap.axial_frequency)) -
                   Big(0.5);
  const Big wall(trap.wall_strength);
  const Big pi = boost::math::constants::pi<Big>();
  const Big kq2 = Big(trap.ion_charge) * Big(trap.ion_charge) /
                  (Big(4) * pi * Big(constants::vacuum_permittivity));
  Big e = 0;
  for (const auto& p : positions) {
    const Big x(p.x), y(p.y);
    e += half_k * ((beta + wall) * x * x + (beta - wall) * y * y);
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      const Big dx = Big(positions[i].x) - Big(positions[j].x);
      const Big dy = Big(positions[i].y) - Big(positions[j].y);
      e += kq2 / sqrt(dx * dx + dy * dy);
    }
  }
  return e.convert_to<double>();
}

std::vector<double> energy_gradient_fd(std::span<const Point> positions, const TrapConfig& trap,
                                       double h) {
  std::vector<Point> work(positions.begin(), positions.end());
  std::vector<double> g(2 * work.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    for (int c = 0; c < 2; ++c) {
      double& coord = c == 0 ? work[i].x : work[i].y;
      const double saved = coord;
      coord = saved + h;
      const double ep = energy_multiprecision(work, trap);
      coord = saved - h;
      const double em = energy_multiprecision(work, trap);
      coord = saved;
      g[2 * i + static_cast<std::size_t>(c)] = (ep - em) / (2 * h);
    }
  }
  return g;
}

JacobiResult jacobi_eigen(Eigen::MatrixXd a, double tol, int max_sweeps) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double scale = a.norm();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= tol * scale) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) > a(j, j); });
  JacobiResult r;
  r.values.resize(n);
  r.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    r.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    r.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return r;
}

std::vector<double> coherent_state_populations(int spins, double theta) {
  // Product state (cos(theta/2) |up> - i sin(theta/2) |down>)^N projected on
  // the Dicke state with k down spins: binom(N, k) cos^2(N-k) sin^2k.
  std::vector<double> p(static_cast<std::size_t>(spins + 1));
  const double c2 = std::pow(std::cos(0.5 * theta), 2);
  const double s2 = std::pow(std::sin(0.5 * theta), 2);
  for (int k = 0; k <= spins; ++k) {
    double binom = 1.0;
    for (int i = 1; i <= k; ++i) binom = binom * (spins - k + i) / i;
    p[static_cast<std::size_t>(k)] = binom * std::pow(c2, spins - k) * std::pow(s2, k);
  }
  return p;
}

}  // namespace penning::oracle
