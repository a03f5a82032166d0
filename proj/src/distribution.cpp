#include "gmc/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "gmc/detail/summation.hpp"
#include "gmc/error.hpp"

namespace gmc {

namespace {

constexpr double kProbSumTolerance = 1e-12;
constexpr double kQuadratureTolerance = 1e-13;
constexpr double kConeSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* message) {
    if (!ok) {
        throw Error(message);
    }
}

Discrete make_discrete(std::vector<Atom> atoms, std::optional<std::vector<Rational>> exact) {
    require(!atoms.empty(), "discrete law needs at least one atom");
    detail::CompensatedSum total;
    for (const auto& atom : atoms) {
        require(std::isfinite(atom.value), "atom values must be finite");
        require(atom.prob > 0.0, "atom probabilities must be strictly positive");
        total.add(atom.prob);
    }
    if (exact) {
        Rational sum{0};
        for (const auto& r : *exact) {
            sum += r;
        }
        require(sum == Rational{1}, "exact atom probabilities must sum to 1");
    } else {
        require(std::abs(total.value() - 1.0) <= kProbSumTolerance,
                "atom probabilities must sum to 1");
    }
    std::vector<double> values;
    values.reserve(atoms.size());
    for (const auto& atom : atoms) {
        values.push_back(atom.value);
    }
    std::sort(values.begin(), values.end());
    require(std::adjacent_find(values.begin(), values.end()) == values.end(),
            "atom values must be pairwise distinct");

    Discrete d{std::move(atoms), std::move(exact), {}};
    d.cumulative.reserve(d.atoms.size());
    detail::CompensatedSum running;
    for (const auto& atom : d.atoms) {
        running.add(atom.prob);
        d.cumulative.push_back(running.value());
    }
    d.cumulative.back() = 1.0;
    return d;
}

double discrete_mean(const Discrete& d) {
    detail::CompensatedSum s;
    for (const auto& atom : d.atoms) {
        s.add(atom.value * atom.prob);
    }
    return s.value();
}

double discrete_central_norm(const Discrete& d, double p) {
    const double mu = discrete_mean(d);
    if (p == kInf) {
        double sup = 0.0;
        for (const auto& atom : d.atoms) {
            sup = std::max(sup, std::abs(atom.value - mu));
        }
        return sup;
    }
    detail::CompensatedSum s;
    for (const auto& atom : d.atoms) {
        s.add(atom.prob * detail::abs_pow(atom.value - mu, p));
    }
    const double moment = s.value();
    if (p == 1.0) {
        return moment;
    }
    if (p == 2.0) {
        return std::sqrt(moment);
    }
    return std::pow(moment, 1.0 / p);
}

// E|Z|^p for standard normal Z.
double std_normal_abs_moment(double p) {
    return std::exp(0.5 * p * std::numbers::ln2 + std::lgamma(0.5 * (p + 1.0)) -
                    0.5 * std::log(std::numbers::pi));
}

// E|X - 1|^p for X ~ Exp(1): e^{-1} (Gamma(p+1) + sum_n 1/(n! (p+n+1))).
double std_exponential_central_moment(double p) {
    double series = 0.0;
    double inv_factorial = 1.0;
    for (int n = 0; n < 200; ++n) {
        const double term = inv_factorial / (p + n + 1.0);
        series += term;
        if (term < 1e-18 * series) {
            break;
        }
        inv_factorial /= (n + 1.0);
    }
    return std::exp(-1.0) * (std::tgamma(p + 1.0) + series);
}

// E|e^{sigma Z} - e^{sigma^2/2}|^p for standard normal Z, split at the kink.
double lognormal_unit_central_moment(double sigma, double p) {
    const double m = std::exp(0.5 * sigma * sigma);
    const double z0 = 0.5 * sigma;
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    auto integrand = [&](double z) {
        const double dens = inv_sqrt_2pi * std::exp(-0.5 * z * z);
        if (dens == 0.0) {
            return 0.0;
        }
        return detail::abs_pow(std::exp(sigma * z) - m, p) * dens;
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    const double right = integrator.integrate([&](double t) { return integrand(z0 + t); }, 0.0,
                                              kInf, kQuadratureTolerance);
    const double left = integrator.integrate([&](double t) { return integrand(z0 - t); }, 0.0,
                                             kInf, kQuadratureTolerance);
    return left + right;
}

// E|X - mu|^p for Pareto(1, shape); the tail [mu, inf) is a complete beta integral.
double pareto_unit_central_moment(double shape, double p) {
    const double mu = shape / (shape - 1.0);
    const double right =
        shape * std::pow(mu, p - shape) * boost::math::beta(shape - p, p + 1.0);
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double left = integrator.integrate(
        [&](double y) { return detail::abs_pow(mu - y, p) * shape * std::pow(y, -shape - 1.0); },
        1.0, mu, kQuadratureTolerance);
    return left + right;
}

double root(double moment, double p) {
    if (p == 1.0) {
        return moment;
    }
    if (p == 2.0) {
        return std::sqrt(moment);
    }
    return std::pow(moment, 1.0 / p);
}

[[noreturn]] void unbounded_support() {
    throw MomentError("moment does not exist: essential supremum is infinite");
}

}  // namespace

Distribution Distribution::discrete(std::vector<Atom> atoms) {
    return Distribution(make_discrete(std::move(atoms), std::nullopt));
}

Distribution Distribution::discrete_exact(const std::vector<std::pair<double, Rational>>& atoms) {
    std::vector<Atom> plain;
    std::vector<Rational> exact;
    for (const auto& [value, prob] : atoms) {
        plain.push_back({value, boost::rational_cast<double>(prob)});
        exact.push_back(prob);
    }
    return Distribution(make_discrete(std::move(plain), std::move(exact)));
}

Distribution Distribution::constant(double c) {
    return discrete_exact({{c, Rational{1}}});
}

Distribution Distribution::bernoulli(double a) {
    require(a > 0.0 && a < 1.0, "Bernoulli parameter must lie in (0, 1)");
    return discrete({{0.0, 1.0 - a}, {1.0, a}});
}

Distribution Distribution::normal(double mu, double sigma) {
    require(std::isfinite(mu) && sigma > 0.0 && std::isfinite(sigma),
            "normal law needs finite mu and sigma > 0");
    return Distribution(Normal{mu, sigma});
}

Distribution Distribution::exponential(double rate) {
    require(rate > 0.0 && std::isfinite(rate), "exponential law needs rate > 0");
    return Distribution(Exponential{rate});
}

Distribution Distribution::lognormal(double mu, double sigma) {
    require(std::isfinite(mu) && sigma > 0.0 && std::isfinite(sigma),
            "lognormal law needs finite mu and sigma > 0");
    return Distribution(LogNormal{mu, sigma});
}

Distribution Distribution::pareto(double scale, double shape) {
    require(scale > 0.0 && shape > 0.0 && std::isfinite(scale) && std::isfinite(shape),
            "pareto law needs scale > 0 and shape > 0");
    return Distribution(Pareto{scale, shape});
}

Distribution Distribution::uniform(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform law needs lo < hi");
    return Distribution(Uniform{lo, hi});
}

std::string Distribution::kind_name() const {
    return std::visit(Overloaded{
                          [](const Discrete&) { return "discrete"; },
                          [](const Normal&) { return "normal"; },
                          [](const Exponential&) { return "exponential"; },
                          [](const LogNormal&) { return "lognormal"; },
                          [](const Pareto&) { return "pareto"; },
                          [](const Uniform&) { return "uniform"; },
                      },
                      kind_);
}

ConeSpec ConeSpec::make(double p, double q, double K) {
    require(p >= 1.0 && std::isfinite(p), "p must satisfy p >= 1");
    require(q > p, "q must exceed p");
    require(K > 1.0 && std::isfinite(K), "K must exceed 1");
    return ConeSpec(p, q, K);
}

double ConeSpec::pq_exponent() const {
    if (q_infinite()) {
        return p_;
    }
    return p_ * q_ / (q_ - p_);
}

double mean(const Distribution& dist) {
    return std::visit(Overloaded{
                          [](const Discrete& d) { return discrete_mean(d); },
                          [](const Normal& d) { return d.mu; },
                          [](const Exponential& d) { return 1.0 / d.rate; },
                          [](const LogNormal& d) { return std::exp(d.mu + 0.5 * d.sigma * d.sigma); },
                          [](const Pareto& d) {
                              if (d.shape <= 1.0) {
                                  throw MomentError("mean does not exist");
                              }
                              return d.shape * d.scale / (d.shape - 1.0);
                          },
                          [](const Uniform& d) { return 0.5 * (d.lo + d.hi); },
                      },
                      dist.kind());
}

double central_norm(const Distribution& dist, double p) {
    require(p >= 1.0, "central norm order must satisfy p >= 1");
    return std::visit(
        Overloaded{
            [&](const Discrete& d) { return discrete_central_norm(d, p); },
            [&](const Normal& d) {
                if (p == kInf) {
                    unbounded_support();
                }
                return d.sigma * root(std_normal_abs_moment(p), p);
            },
            [&](const Exponential& d) {
                if (p == kInf) {
                    unbounded_support();
                }
                return root(std_exponential_central_moment(p), p) / d.rate;
            },
            [&](const LogNormal& d) {
                if (p == kInf) {
                    unbounded_support();
                }
                return std::exp(d.mu) * root(lognormal_unit_central_moment(d.sigma, p), p);
            },
            [&](const Pareto& d) {
                if (d.shape <= 1.0) {
                    throw MomentError("mean does not exist");
                }
                if (p == kInf) {
                    unbounded_support();
                }
                if (p >= d.shape) {
                    throw MomentError("moment does not exist: order reaches the tail index");
                }
                return d.scale * root(pareto_unit_central_moment(d.shape, p), p);
            },
            [&](const Uniform& d) {
                const double half = 0.5 * (d.hi - d.lo);
                if (p == kInf) {
                    return half;
                }
                return half * std::pow(p + 1.0, -1.0 / p);
            },
        },
        dist.kind());
}

double kappa(const Distribution& dist, double p, double q) {
    require(p < q, "kappa needs p < q");
    const double rho_p = central_norm(dist, p);
    if (rho_p == 0.0) {
        throw Error("kappa undefined: central norm is zero");
    }
    return central_norm(dist, q) / rho_p;
}

bool in_cone(const Distribution& dist, const ConeSpec& cone) {
    double rho_p = 0.0;
    double rho_q = 0.0;
    try {
        rho_p = central_norm(dist, cone.p());
        rho_q = central_norm(dist, cone.q());
    } catch (const MomentError&) {
        return false;
    }
    return rho_q <= cone.K() * rho_p * (1.0 + kConeSlack);
}

Distribution bernoulli_threshold_instance(const ConeSpec& cone) {
    const double a = std::min(std::pow(cone.K(), -cone.pq_exponent()), 0.5);
    return Distribution::bernoulli(a);
}

Distribution scale_shift(const Distribution& dist, double a, double c) {
    require(std::isfinite(a) && std::isfinite(c), "scale and shift must be finite");
    if (a == 0.0) {
        return Distribution::constant(c);
    }
    auto unsupported = [&]() -> Distribution {
        throw Error("scale_shift unsupported for family '" + dist.kind_name() +
                    "' with this (a, c)");
    };
    return std::visit(
        Overloaded{
            [&](const Discrete& d) {
                if (d.exact) {
                    std::vector<std::pair<double, Rational>> atoms;
                    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
                        atoms.emplace_back(a * d.atoms[i].value + c, (*d.exact)[i]);
                    }
                    return Distribution::discrete_exact(atoms);
                }
                std::vector<Atom> atoms;
                for (const auto& atom : d.atoms) {
                    atoms.push_back({a * atom.value + c, atom.prob});
                }
                return Distribution::discrete(std::move(atoms));
            },
            [&](const Normal& d) { return Distribution::normal(a * d.mu + c, std::abs(a) * d.sigma); },
            [&](const Exponential& d) {
                return (c == 0.0 && a > 0.0) ? Distribution::exponential(d.rate / a) : unsupported();
            },
            [&](const LogNormal& d) {
                return (c == 0.0 && a > 0.0) ? Distribution::lognormal(d.mu + std::log(a), d.sigma)
                                             : unsupported();
            },
            [&](const Pareto& d) {
                return (c == 0.0 && a > 0.0) ? Distribution::pareto(a * d.scale, d.shape)
                                             : unsupported();
            },
            [&](const Uniform& d) {
                const double x = a * d.lo + c;
                const double y = a * d.hi + c;
                return Distribution::uniform(std::min(x, y), std::max(x, y));
            },
        },
        dist.kind());
}

std::size_t sample_index(const Discrete& d, Stream& stream) {
    const double u = stream.next_uniform();
    const auto it = std::upper_bound(d.cumulative.begin(), d.cumulative.end(), u);
    const auto idx = static_cast<std::size_t>(it - d.cumulative.begin());
    return std::min(idx, d.atoms.size() - 1);
}

double sample(const Distribution& dist, Stream& stream) {
    return std::visit(
        Overloaded{
            [&](const Discrete& d) { return d.atoms[sample_index(d, stream)].value; },
            [&](const Normal& d) {
                const double u = stream.next_open_uniform();
                return d.mu - d.sigma * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
            },
            [&](const Exponential& d) { return -std::log(stream.next_open_uniform()) / d.rate; },
            [&](const LogNormal& d) {
                const double u = stream.next_open_uniform();
                return std::exp(d.mu - d.sigma * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u));
            },
            [&](const Pareto& d) {
                return d.scale * std::pow(stream.next_open_uniform(), -1.0 / d.shape);
            },
            [&](const Uniform& d) { return d.lo + (d.hi - d.lo) * stream.next_uniform(); },
        },
        dist.kind());
}

}  // namespace gmc
