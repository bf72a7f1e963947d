#pragma once

#include <vector>

#include "syk/kernel.hpp"
#include "syk/numeric.hpp"

namespace syk {

/// Truncated Laurent series sum_{k >= valuation} c_k x^k with exact rational
/// coefficients, known up to and including x^order.
class Series {
public:
    Series() = default;
    /// Zero series known up to x^order.
    explicit Series(int order);
    /// Coefficients c_valuation, c_{valuation+1}, ...; entries past `order` are dropped.
    Series(std::vector<Rational> coefficients, int valuation, int order);

    static Series monomial(const Rational& c, int exponent, int order);
    static Series one(int order) { return monomial(1, 0, order); }

    int order() const { return order_; }
    /// Lowest exponent with a stored (possibly zero) coefficient.
    int valuation() const { return valuation_; }
    /// Lowest exponent with a nonzero coefficient, or order() + 1 for the zero series.
    int true_valuation() const;
    Rational coefficient(int exponent) const;
    bool is_integral() const;
    std::vector<Integer> integer_coefficients(int from, int to) const;

    Series truncated(int order) const;

    Series operator+(const Series& other) const;
    Series operator-(const Series& other) const;
    Series operator*(const Series& other) const;
    Series operator*(const Rational& c) const;
    Series operator-() const;
    Series pow(unsigned k) const;

    /// 1/f for a series with nonzero lowest coefficient (Laurent allowed).
    Series reciprocal() const;

    /// f(inner(x)) by Horner evaluation. Requires valuation() >= 0 and inner to have
    /// zero constant term.
    Series compose(const Series& inner) const;

private:
    void normalize();

    int valuation_ = 0;
    int order_ = -1;
    std::vector<Rational> c_;
};

/// G_T = 1 + z G_T^q, coefficients are the Fuss-Catalan numbers.
Series tree_series(int q, int order);

/// y(z) = z G_T(z)^q = G_T(z) - 1.
Series y_of_z(int q, int order);

enum class ChainType { kCCUnequal, kCCEqual, kCWUnequal, kCWEqual, kWWUnequal, kWWEqual };

/// A chain generating function written as z_white^white_power * z_colored^colored_power * body(y),
/// with y = z_white * z_colored.
struct ChainSeries {
    int white_power = 0;
    int colored_power = 0;
    Series body;
};

ChainSeries chain_series(ChainType type, int q, int order);

/// Generating function of a kernel edge class by internal white count (colored weight 1).
/// Classes as in chain_class(): 0 unequal, 1 equal with a white end, 2 equal colored-colored.
Series chain_white_series(int chain_class, int q, int order);

/// Number of color walks of length s on the complete graph K_q between two fixed
/// colors that are equal or not.
Integer walk_count(int q, int s, bool equal);

/// B_K(y) (y/((1+y)(1-(q-1)y)))^E y^{V_white}, as a power series in y.
Series kernel_y_series(const KernelSignature& sig, int q, int order);

/// kernel_y_series composed with y = z G_T^q.
Series kernel_series(const KernelDiagram& k, int order);

/// Sum over the kernel catalog: coefficient n is the number g_{n,delta} of rooted
/// bipartite colored graphs with 2n vertices and order delta.
Series graphs_series(int q, int delta, int order);

/// Same sum computed by composing with Horner evaluation (slower; used as a cross-check).
Series graphs_series_horner(int q, int delta, int order);

/// 2^delta graphs_series.
Series nonbipartite_series(int q, int delta, int order);

/// Sum of kernel_y_series over the catalog, grouped by signature.
Series catalog_y_series(int q, int delta, int order);

/// Rooted trivalent map counts m_1..m_max.
std::vector<Integer> m_sequence(int delta_max);

/// (q-1)^(q-1) / q^q.
Rational z_c(int q);

double kappa(int q, int delta);

/// kappa_delta n^{3(delta-1)/2} z_c^{-n}, returned as its natural logarithm.
double log_asymptotic_estimate(int q, int delta, long n);
double asymptotic_estimate(int q, int delta, long n);

/// g / estimate computed in log space, safe for huge g.
double estimate_ratio(const Integer& g, int q, int delta, long n);

}  // namespace syk
