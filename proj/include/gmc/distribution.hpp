#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "gmc/rand_streams.hpp"

namespace gmc {

using Rational = boost::rational<std::int64_t>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Atom {
    double value;
    double prob;
};

struct Discrete {
    std::vector<Atom> atoms;
    /// Exact probabilities, present when every atom was supplied as a rational.
    std::optional<std::vector<Rational>> exact;
    /// Cumulative probabilities for inverse-CDF sampling; last entry is 1.
    std::vector<double> cumulative;
};

struct Normal {
    double mu;
    double sigma;
};

struct Exponential {
    double rate;
};

struct LogNormal {
    double mu;
    double sigma;
};

struct Pareto {
    double scale;
    double shape;
};

struct Uniform {
    double lo;
    double hi;
};

/// Law of a real random variable with computable central absolute moments.
/// Immutable once constructed; factories validate the parameter domain.
class Distribution {
public:
    using Kind = std::variant<Discrete, Normal, Exponential, LogNormal, Pareto, Uniform>;

    static Distribution discrete(std::vector<Atom> atoms);
    static Distribution discrete_exact(const std::vector<std::pair<double, Rational>>& atoms);
    static Distribution constant(double c);
    static Distribution bernoulli(double a);
    static Distribution normal(double mu, double sigma);
    static Distribution exponential(double rate);
    static Distribution lognormal(double mu, double sigma);
    static Distribution pareto(double scale, double shape);
    static Distribution uniform(double lo, double hi);

    const Kind& kind() const { return kind_; }
    std::string kind_name() const;

    const Discrete* as_discrete() const { return std::get_if<Discrete>(&kind_); }

private:
    explicit Distribution(Kind kind) : kind_(std::move(kind)) {}

    Kind kind_;
};

/// The triple (p, q, K) of the cone ||Y - EY||_q <= K ||Y - EY||_p.
/// q = infinity is represented by kInf.
class ConeSpec {
public:
    static ConeSpec make(double p, double q, double K);

    double p() const { return p_; }
    double q() const { return q_; }
    double K() const { return K_; }
    bool q_infinite() const { return q_ == kInf; }

    /// pq/(q - p), read as p when q is infinite.
    double pq_exponent() const;

    /// min{q, 2}
    double q_tilde() const { return q_ < 2.0 ? q_ : 2.0; }

private:
    ConeSpec(double p, double q, double K) : p_(p), q_(q), K_(K) {}

    double p_;
    double q_;
    double K_;
};

double mean(const Distribution& dist);

/// ||Y - EY||_p for p in [1, inf]. Throws MomentError when infinite.
double central_norm(const Distribution& dist, double p);

double kappa(const Distribution& dist, double p, double q);

bool in_cone(const Distribution& dist, const ConeSpec& cone);

/// Bernoulli with a = K^{-pq/(q-p)} (K^{-p} for q = inf), capped at 1/2.
Distribution bernoulli_threshold_instance(const ConeSpec& cone);

/// Law of a*Y + c.
Distribution scale_shift(const Distribution& dist, double a, double c);

double sample(const Distribution& dist, Stream& stream);

/// Index of the sampled atom of a discrete law.
std::size_t sample_index(const Discrete& dist, Stream& stream);

}  // namespace gmc
