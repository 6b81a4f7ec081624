#include "coarray/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "coarray/estimation.hpp"
#include "coarray/metrics.hpp"

namespace coarray {

double BoundConstants::c1() const {
    return c / (2.0 * std::sqrt(2.0) * kSubGaussianK * kSubGaussianK);
}

void BoundConstants::validate() const {
    if (!(c > 0)) throw std::invalid_argument("constant c must be positive");
    if (!(c2 > 0)) throw std::invalid_argument("constant c2 must be positive");
    if (!(gamma > 1)) throw std::invalid_argument("gamma must exceed 1");
}

BoundConstants parse_constants(const std::string& text) {
    BoundConstants k;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("constant override must be key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        double value = 0;
        try {
            std::size_t used = 0;
            value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number for constant '" + key + "'");
        }
        if (key == "c") k.c = value;
        else if (key == "c2") k.c2 = value;
        else if (key == "gamma") k.gamma = value;
        else throw std::invalid_argument("unknown constant '" + key + "'");
    }
    k.validate();
    return k;
}

EigenGapViolation::EigenGapViolation(double beta)
    : std::domain_error("eigen gap condition violated (beta = " + std::to_string(beta) + ")"),
      beta_(beta) {}

namespace {

std::vector<int> contiguous_positions(int k) {
    std::vector<int> pos(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pos[static_cast<std::size_t>(i)] = i;
    return pos;
}

double smallest_singular_value(const CMatrix& a) {
    if (a.cols() > a.rows()) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(a.cols() - 1);
}

}  // namespace

double vandermonde_sigma_min_sq(int k, std::span<const double> omegas) {
    const double s = smallest_singular_value(steering_matrix(contiguous_positions(k), omegas));
    return s * s;
}

double coarray_sigma_min(const CoarrayStructure& c, const SourceScene& scene) {
    if (!c.hole_free) throw NotHoleFree("coarray_sigma_min");
    return smallest_singular_value(
        steering_matrix(contiguous_positions(c.m_ca + 1), scene.omegas()));
}

double eigen_gap(const SourceScene& scene, const CoarrayStructure& c) {
    const double s = coarray_sigma_min(c, scene);
    return scene.p_min() * s * s - scene.noise_power();
}

SubspaceConstants subspace_constants(int s) {
    if (s < 1) throw std::invalid_argument("subspace constants need S >= 1");
    const double sd = static_cast<double>(s);
    return SubspaceConstants{
        std::pow(2.0, -sd) / (4.0 * std::sqrt(2.0)),
        14.0 * kPi * std::sqrt(2.0) * std::pow(sd, 1.5) * std::pow(4.0, sd),
    };
}

QFactor q_factor(double beta, double sigma_s, int m_ca, double ry_norm, double redundancy,
                 int num_sources) {
    if (!(beta > 0)) throw EigenGapViolation(beta);
    const auto sc = subspace_constants(num_sources);
    const double q = sc.c_s_prime * std::sqrt(static_cast<double>(m_ca) + 1.0) / (beta * sigma_s);
    return QFactor{q, q * ry_norm, ry_norm * std::sqrt(redundancy) / (sc.c_s * beta)};
}

double covariance_norm(const SensorArray& array, const SourceScene& scene) {
    return hermitian_spectral_norm(true_covariance(array, scene));
}

QFactor q_factor(const SourceScene& scene, const SensorArray& array,
                 const CoarrayStructure& c) {
    const double sigma_s = coarray_sigma_min(c, scene);
    const double beta = scene.p_min() * sigma_s * sigma_s - scene.noise_power();
    return q_factor(beta, sigma_s, c.m_ca, covariance_norm(array, scene),
                    redundancy_coefficient(c), static_cast<int>(scene.num_sources()));
}

double tail_bound(double epsilon, double num_snapshots, double ry_norm, double redundancy,
                  int m_ca, const BoundConstants& k) {
    if (epsilon < 0) throw std::invalid_argument("tail_bound needs epsilon >= 0");
    if (num_snapshots < 1) throw std::invalid_argument("tail_bound needs L >= 1");
    const double quad = k.c2 * epsilon * epsilon / (ry_norm * ry_norm * redundancy);
    const double lin = epsilon / (ry_norm * std::sqrt(redundancy));
    const double value =
        8.0 * m_ca * std::exp(-k.c1() * num_snapshots * std::min(quad, lin));
    return std::clamp(value, 0.0, 1.0);
}

double tail_bound(double epsilon, double num_snapshots, const SourceScene& scene,
                  const SensorArray& array, const CoarrayStructure& c, const BoundConstants& k) {
    return tail_bound(epsilon, num_snapshots, covariance_norm(array, scene),
                      redundancy_coefficient(c), c.m_ca, k);
}

double tail_bound_inverse(double target, double num_snapshots, double ry_norm,
                          double redundancy, int m_ca, const BoundConstants& k) {
    if (!(target > 0 && target < 1)) throw std::invalid_argument("target must be in (0, 1)");
    double lo = 0;
    double hi = ry_norm;
    while (tail_bound(hi, num_snapshots, ry_norm, redundancy, m_ca, k) > target) hi *= 2;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tail_bound(mid, num_snapshots, ry_norm, redundancy, m_ca, k) > target) lo = mid;
        else hi = mid;
    }
    return hi;
}

SnapshotRequirement snapshot_requirement(double epsilon, double delta, const SourceScene& scene,
                                         const SensorArray& array, const CoarrayStructure& c,
                                         const BoundConstants& k) {
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must be in (0, 1)");
    const double sigma_s = coarray_sigma_min(c, scene);
    const double beta = scene.p_min() * sigma_s * sigma_s - scene.noise_power();
    const double ry = covariance_norm(array, scene);
    const double red = redundancy_coefficient(c);
    const int s = static_cast<int>(scene.num_sources());
    const QFactor qf = q_factor(beta, sigma_s, c.m_ca, ry, red, s);
    const auto sc = subspace_constants(s);

    SnapshotRequirement out;
    out.terms = {
        qf.q1 * qf.q1 * red / (k.c2 * epsilon * epsilon),
        qf.q1 * std::sqrt(red) / epsilon,
        qf.l0 * qf.l0 / k.c2,
        qf.l0,
    };
    out.log_factor = k.c3() * std::log(8.0 * c.m_ca / delta);
    const double p = static_cast<double>(array.size());
    out.epsilon_cap = qf.q * std::min(sc.c_s * beta, scene.p_min() * p * std::sqrt(red) / k.c2);
    out.small_eps_regime = epsilon <= out.epsilon_cap;
    if (out.small_eps_regime) {
        out.active_term = 0;
    } else {
        out.active_term = static_cast<int>(
            std::max_element(out.terms.begin(), out.terms.end()) - out.terms.begin());
    }
    out.value = out.log_factor * out.terms[static_cast<std::size_t>(out.active_term)];
    return out;
}

SpecializedBound specialized_bounds(Regime regime, const SpecializedParams& p,
                                    const BoundConstants& k) {
    k.validate();
    if (p.num_sensors < 1 || p.num_sources < 1) {
        throw std::invalid_argument("specialized bounds need P >= 1 and S >= 1");
    }
    if (!(p.p_min > 0) || p.p_max < p.p_min) {
        throw std::invalid_argument("need 0 < p_min <= p_max");
    }
    const auto sc = subspace_constants(p.num_sources);
    const double pp = static_cast<double>(p.num_sensors);
    const double s = static_cast<double>(p.num_sources);
    const double noise_term = s + p.noise_power / p.p_max;
    const double range_sq = (p.p_max / p.p_min) * (p.p_max / p.p_min);

    SpecializedBound out;
    out.delta_ok = p.delta > 0 && p.delta < 1;
    out.epsilon_ok = p.epsilon > 0;
    if (regime == Regime::ula) {
        out.c_prime = k.gamma / (k.gamma - 1.0);
        out.geometry_constant = 8.0 * sc.c_s_prime * sc.c_s_prime * std::pow(out.c_prime, 3) *
                                (k.c3() / k.c2) * noise_term * noise_term;
        out.epsilon_cap = sc.c_s * sc.c_s_prime;
        out.separation_ok = p.separation >= k.gamma / pp;
        out.snr_ok = p.noise_power == 0 || p.p_min / p.noise_power > 2.0 * out.c_prime / pp;
        out.sensors_ok = p.num_sensors >= 3 && p.num_sources <= p.num_sensors;
        const double lg = std::log(8.0 * pp / p.delta);
        out.value = out.geometry_constant / (p.epsilon * p.epsilon) * range_sq * lg * lg;
    } else {
        out.c_prime = 5.0 * k.gamma / (k.gamma - 1.0);
        out.geometry_constant = 4.0 * sc.c_s_prime * sc.c_s_prime * std::pow(out.c_prime, 3) *
                                (k.c3() / k.c2) * noise_term * noise_term;
        out.epsilon_cap = std::sqrt(0.2) * sc.c_s * sc.c_s_prime;
        out.separation_ok = p.separation >= 5.0 * k.gamma / (pp * pp);
        out.snr_ok =
            p.noise_power == 0 || p.p_min / p.noise_power > 2.0 * out.c_prime / (pp * pp);
        out.sensors_ok = p.num_sensors >= 3 && 5.0 * s <= pp * pp;
        out.value = out.geometry_constant / (p.epsilon * p.epsilon) * range_sq *
                    std::log(8.0 * pp * pp / p.delta);
    }
    out.epsilon_ok = out.epsilon_ok && p.epsilon <= out.epsilon_cap;
    return out;
}

namespace {

void require_separation(std::span<const double> omegas, double needed, const char* what) {
    if (omegas.size() >= 2 && min_separation(omegas) < needed * (1.0 - 1e-12)) {
        throw std::invalid_argument(std::string(what) + ": separation precondition violated");
    }
}

}  // namespace

double vandermonde_floor(int k, std::span<const double> omegas, double gamma) {
    if (!(gamma > 1)) throw std::invalid_argument("vandermonde_floor needs gamma > 1");
    if (omegas.empty() || omegas.size() > static_cast<std::size_t>(k)) {
        throw std::invalid_argument("vandermonde_floor needs 1 <= S <= k");
    }
    require_separation(omegas, gamma / k, "vandermonde_floor");
    return k * (gamma - 1.0) / gamma;
}

double nested_vandermonde_floor(int num_sensors, std::span<const double> omegas, double gamma) {
    if (!(gamma > 1)) throw std::invalid_argument("nested_vandermonde_floor needs gamma > 1");
    const double p = num_sensors;
    if (num_sensors < 3 || omegas.empty() || 5.0 * omegas.size() > p * p) {
        throw std::invalid_argument("nested_vandermonde_floor needs P >= 3 and S <= P^2/5");
    }
    require_separation(omegas, 5.0 * gamma / (p * p), "nested_vandermonde_floor");
    return p * p * (gamma - 1.0) / (5.0 * gamma);
}

BoundReport bound_report(const SourceScene& scene, const SensorArray& array, double epsilon,
                         double delta, const BoundConstants& k) {
    k.validate();
    const CoarrayStructure c = coarray_structure(array);
    BoundReport r;
    r.m_ca = c.m_ca;
    r.redundancy = redundancy_coefficient(c);
    r.sigma_s_coarray = coarray_sigma_min(c, scene);
    r.beta = scene.p_min() * r.sigma_s_coarray * r.sigma_s_coarray - scene.noise_power();
    r.ry_norm = covariance_norm(array, scene);
    const auto sc = subspace_constants(static_cast<int>(scene.num_sources()));
    r.c_s = sc.c_s;
    r.c_s_prime = sc.c_s_prime;
    r.eigen_gap_ok = r.beta > 0;
    if (r.eigen_gap_ok) {
        const QFactor qf = q_factor(r.beta, r.sigma_s_coarray, r.m_ca, r.ry_norm, r.redundancy,
                                    static_cast<int>(scene.num_sources()));
        r.q = qf.q;
        r.q1 = qf.q1;
        r.l0 = qf.l0;
        r.requirement = snapshot_requirement(epsilon, delta, scene, array, c, k);
        r.l_required = r.requirement.value;
    }
    return r;
}

bool tail_bound_sound(const ExceedanceObservation& obs, const BoundConstants& k, double num_se) {
    const double bound =
        tail_bound(obs.epsilon, obs.num_snapshots, obs.ry_norm, obs.redundancy, obs.m_ca, k);
    const double p = obs.empirical_probability;
    const double se = std::sqrt(p * (1.0 - p) / obs.trials);
    return p - bound <= num_se * se;
}

double calibrate_constant(std::span<const ExceedanceObservation> obs, double lo, double hi,
                          double num_se) {
    auto sound = [&](double c) {
        BoundConstants k;
        k.c = c;
        return std::all_of(obs.begin(), obs.end(),
                           [&](const auto& o) { return tail_bound_sound(o, k, num_se); });
    };
    if (!sound(lo)) return lo;
    if (sound(hi)) return hi;
    double a = std::log(lo);
    double b = std::log(hi);
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (a + b);
        if (sound(std::exp(mid))) a = mid;
        else b = mid;
    }
    return std::exp(a);
}

}  // namespace coarray
