#include "syk/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace syk {

Series::Series(int order) : valuation_(0), order_(order), c_(order >= 0 ? order + 1 : 0) {}

Series::Series(std::vector<Rational> coefficients, int valuation, int order)
    : valuation_(valuation), order_(order), c_(std::move(coefficients))
{
    normalize();
}

void Series::normalize()
{
    const int len = std::max(0, order_ - valuation_ + 1);
    c_.resize(len);
    for (auto& x : c_) x.canonicalize();
}

Series Series::monomial(const Rational& c, int exponent, int order)
{
    if (exponent > order) return Series(std::vector<Rational>{}, exponent, order);
    std::vector<Rational> coeffs(order - exponent + 1);
    coeffs[0] = c;
    return Series(std::move(coeffs), exponent, order);
}

int Series::true_valuation() const
{
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (sgn(c_[k]) != 0) return valuation_ + static_cast<int>(k);
    return order_ + 1;
}

Rational Series::coefficient(int exponent) const
{
    if (exponent > order_) throw std::out_of_range("Series::coefficient: beyond truncation order");
    if (exponent < valuation_) return 0;
    return c_[exponent - valuation_];
}

bool Series::is_integral() const
{
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x.get_den() == 1; });
}

std::vector<Integer> Series::integer_coefficients(int from, int to) const
{
    std::vector<Integer> out;
    for (int k = from; k <= to; ++k) {
        const Rational x = coefficient(k);
        if (x.get_den() != 1) throw std::domain_error("Series: non-integral coefficient");
        out.push_back(x.get_num());
    }
    return out;
}

Series Series::truncated(int order) const
{
    std::vector<Rational> coeffs = c_;
    return Series(std::move(coeffs), valuation_, std::min(order, order_));
}

Series Series::operator+(const Series& other) const
{
    const int v = std::min(valuation_, other.valuation_);
    const int o = std::min(order_, other.order_);
    std::vector<Rational> coeffs(std::max(0, o - v + 1));
    for (int k = v; k <= o; ++k) {
        Rational x = 0;
        if (k >= valuation_) x += c_[k - valuation_];
        if (k >= other.valuation_) x += other.c_[k - other.valuation_];
        coeffs[k - v] = x;
    }
    return Series(std::move(coeffs), v, o);
}

Series Series::operator-() const { return *this * Rational(-1); }

Series Series::operator-(const Series& other) const { return *this + (-other); }

Series Series::operator*(const Rational& c) const
{
    std::vector<Rational> coeffs = c_;
    for (auto& x : coeffs) x *= c;
    return Series(std::move(coeffs), valuation_, order_);
}

Series Series::operator*(const Series& other) const
{
    const int tv1 = true_valuation();
    const int tv2 = other.true_valuation();
    const int o = std::min(order_ + tv2, other.order_ + tv1);
    const int v = valuation_ + other.valuation_;
    const int len = std::max(0, o - v + 1);
    std::vector<Rational> coeffs(len);
    const int n1 = static_cast<int>(c_.size());
    const int n2 = static_cast<int>(other.c_.size());
    if (is_integral() && other.is_integral()) {
        std::vector<Integer> acc(len);
        for (int i = 0; i < n1 && i < len; ++i) {
            const Integer& a = c_[i].get_num();
            if (sgn(a) == 0) continue;
            for (int j = 0; j < n2 && i + j < len; ++j) mpz_addmul(acc[i + j].get_mpz_t(), a.get_mpz_t(), other.c_[j].get_num_mpz_t());
        }
        for (int k = 0; k < len; ++k) coeffs[k] = Rational(acc[k]);
    } else {
        for (int i = 0; i < n1 && i < len; ++i) {
            if (sgn(c_[i]) == 0) continue;
            for (int j = 0; j < n2 && i + j < len; ++j) coeffs[i + j] += c_[i] * other.c_[j];
        }
    }
    return Series(std::move(coeffs), v, o);
}

Series Series::pow(unsigned k) const
{
    if (k == 0) return one(order_);
    Series result;
    bool have = false;
    Series base = *this;
    while (k) {
        if (k & 1U) {
            result = have ? result * base : base;
            have = true;
        }
        k >>= 1U;
        if (k) base = base * base;
    }
    return result;
}

Series Series::reciprocal() const
{
    const int tv = true_valuation();
    if (tv > order_) throw std::domain_error("Series::reciprocal: zero series");
    const Rational lead = c_[tv - valuation_];
    // f = x^tv * lead * (1 + h), h with positive valuation; invert term by term.
    const int rel_order = order_ - tv;  // known terms of f / x^tv
    std::vector<Rational> f(rel_order + 1);
    for (int k = 0; k <= rel_order; ++k) f[k] = c_[tv - valuation_ + k] / lead;
    std::vector<Rational> g(rel_order + 1);
    g[0] = 1;
    for (int k = 1; k <= rel_order; ++k) {
        Rational s = 0;
        for (int j = 1; j <= k; ++j) s += f[j] * g[k - j];
        g[k] = -s;
    }
    for (auto& x : g) x /= lead;
    return Series(std::move(g), -tv, rel_order - tv);
}

Series Series::compose(const Series& inner) const
{
    if (valuation_ < 0) throw std::domain_error("Series::compose: outer series has negative powers");
    if (inner.true_valuation() < 1) throw std::domain_error("Series::compose: inner series needs zero constant term");
    const int o = std::min(order_, inner.order());
    Series acc(o);
    for (int k = order_; k >= 0; --k) {
        acc = acc * inner;
        acc = acc + monomial(coefficient(k), 0, o);
        acc = acc.truncated(o);
    }
    return acc;
}

// ---------------------------------------------------------------------------

Series tree_series(int q, int order)
{
    std::vector<Rational> c(order + 1);
    for (int n = 0; n <= order; ++n) {
        const unsigned long m = static_cast<unsigned long>(q) * n + 1;
        c[n] = Rational(binomial(m, n), Integer(m));
    }
    return Series(std::move(c), 0, order);
}

Series y_of_z(int q, int order) { return tree_series(q, order) - Series::one(order); }

namespace {

// R(y) = 1/((1+y)(1-(q-1)y)), r_k = ((q-1)^{k+1} - (-1)^{k+1}) / q.
Series r_series(int q, int order)
{
    std::vector<Rational> c(order + 1);
    Integer p = q - 1;
    for (int k = 0; k <= order; ++k) {
        const Integer sign = (k % 2 == 0) ? Integer(-1) : Integer(1);
        c[k] = Rational((p - sign) / q);
        p *= q - 1;
    }
    return Series(std::move(c), 0, order);
}

Series y_power(int k, int order) { return Series::monomial(1, k, order); }

// [z^n] y(z)^k = (k/n) C(qn, n-k) for y = z G_T(z)^q.
Series compose_with_y(const Series& in_y, int q, int order)
{
    if (in_y.true_valuation() < 0)
        throw std::domain_error("compose_with_y: negative powers of y left over");
    if (in_y.order() < order) throw std::domain_error("compose_with_y: y-series truncated too early");
    std::vector<Rational> out(order + 1);
    out[0] = in_y.coefficient(0);
    for (int n = 1; n <= order; ++n) {
        const unsigned long qn = static_cast<unsigned long>(q) * n;
        // binom(qn, n-k) for k = n down to 1, i.e. j = n-k = 0..n-1.
        Integer b = 1;
        Rational total = 0;
        Integer acc = 0;
        bool integral = true;
        for (int j = 0; j <= n - 1; ++j) {
            const int k = n - j;
            const Rational& c = in_y.coefficient(k);
            if (sgn(c) != 0) {
                if (c.get_den() == 1 && integral) {
                    Integer term = c.get_num() * b * k;
                    acc += term;
                } else {
                    integral = false;
                    total += c * Rational(b * k);
                }
            }
            b = b * (qn - j) / (j + 1);
        }
        total += Rational(acc);
        out[n] = total / Rational(n);
    }
    return Series(std::move(out), 0, order);
}

}  // namespace

Integer walk_count(int q, int s, bool equal)
{
    if (s < 0) return 0;
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), q - 1, s);
    const int sign = s % 2 == 0 ? 1 : -1;
    if (equal) return (p + (q - 1) * sign) / q;
    return (p - sign) / q;
}

ChainSeries chain_series(ChainType type, int q, int order)
{
    const Series r = r_series(q, order);
    const Series eq_body = Series::one(order) + y_power(2, order) * r * Rational(q - 1);
    switch (type) {
    case ChainType::kCCUnequal: return {1, 0, r};
    case ChainType::kCCEqual: return {1, 0, y_power(1, order) * r * Rational(q - 1)};
    case ChainType::kCWUnequal: return {1, 1, r};
    case ChainType::kCWEqual: return {0, 0, eq_body};
    case ChainType::kWWUnequal: return {1, 2, r};
    case ChainType::kWWEqual: return {0, 1, eq_body};
    }
    throw std::invalid_argument("chain_series: unknown chain type");
}

Series chain_white_series(int chain_class, int q, int order)
{
    const Series r = r_series(q, order);
    switch (chain_class) {
    case 0: return (y_power(1, order) * r).truncated(order);
    case 1: return (Series::one(order) + y_power(2, order) * r * Rational(q - 1)).truncated(order);
    case 2: return (y_power(2, order) * r * Rational(q - 1)).truncated(order);
    }
    throw std::invalid_argument("chain_white_series: unknown class");
}

Series kernel_y_series(const KernelSignature& sig, int q, int order)
{
    const int work = order + sig.m + 1;
    // B_K = ((q-1) y)^a (1/y - q + 2)^m, a Laurent polynomial.
    Series b = Series::one(work + sig.m + 1);
    for (int i = 0; i < sig.a; ++i) b = b * Series::monomial(q - 1, 1, work + sig.m + 1);
    const Series inv_y_term = Series::monomial(1, -1, work + sig.m + 1) + Series::monomial(2 - q, 0, work + sig.m + 1);
    for (int i = 0; i < sig.m; ++i) b = b * inv_y_term;
    const Series y_r = y_power(1, work) * r_series(q, work);
    Series result = b * y_r.pow(sig.e) * y_power(sig.w, work + sig.w);
    if (result.true_valuation() < 0) throw std::logic_error("kernel_y_series: negative powers survived");
    return result.truncated(order);
}

Series kernel_series(const KernelDiagram& k, int order)
{
    const Series in_y = kernel_y_series(signature(edge_stats(k)), k.q, order);
    return compose_with_y(in_y, k.q, order);
}

Series catalog_y_series(int q, int delta, int order)
{
    std::map<KernelSignature, Integer> census;
    enumerate_kernels(q, delta, [&](const KernelDiagram& k) { census[signature(edge_stats(k))] += 1; });

    // P_sig = (q-1)^a y^{a+e-m+w} (1-(q-2)y)^m R^e; group by (m, e).
    std::map<std::pair<int, int>, std::vector<Rational>> prefix;
    for (const auto& [sig, count] : census) {
        auto& poly = prefix[{sig.m, sig.e}];
        const int exponent = sig.a + sig.e - sig.m + sig.w;
        if (exponent > order) continue;
        if (static_cast<int>(poly.size()) <= exponent) poly.resize(exponent + 1);
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), q - 1, sig.a);
        poly[exponent] += Rational(count * scale);
    }
    const Series r = r_series(q, order);
    const Series one_minus = Series::one(order) + Series::monomial(2 - q, 1, order);
    Series total(order);
    std::map<int, Series> r_powers;
    for (const auto& [key, poly] : prefix) {
        const auto [m, e] = key;
        if (!r_powers.count(e)) r_powers[e] = r.pow(e).truncated(order);
        Series t = r_powers[e];
        for (int i = 0; i < m; ++i) t = (t * one_minus).truncated(order);
        total = total + (Series(poly, 0, order) * t).truncated(order);
    }
    return total;
}

Series graphs_series(int q, int delta, int order)
{
    if (q < 2) throw std::out_of_range("graphs_series: q must be at least 2");
    return compose_with_y(catalog_y_series(q, delta, order), q, order);
}

Series graphs_series_horner(int q, int delta, int order)
{
    return catalog_y_series(q, delta, order).compose(y_of_z(q, order));
}

Series nonbipartite_series(int q, int delta, int order)
{
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, delta);
    return graphs_series(q, delta, order) * Rational(scale);
}

std::vector<Integer> m_sequence(int delta_max)
{
    if (delta_max < 1) throw std::out_of_range("m_sequence: need at least one term");
    std::vector<Integer> m(delta_max + 1);
    m[1] = 1;
    if (delta_max >= 2) m[2] = 5;
    for (int d = 3; d <= delta_max; ++d) {
        Integer s = Integer(6 * d - 8) * m[d - 1];
        for (int k = 1; k <= d - 1; ++k) s += m[k] * m[d - k];
        m[d] = s;
    }
    return {m.begin() + 1, m.end()};
}

Rational z_c(int q)
{
    Integer num;
    Integer den;
    mpz_ui_pow_ui(num.get_mpz_t(), q - 1, q - 1);
    mpz_ui_pow_ui(den.get_mpz_t(), q, q);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

namespace {

// Gamma(x/2) for a positive integer x.
double gamma_half(int twice)
{
    if (twice <= 0) throw std::domain_error("gamma_half: argument must be positive");
    if (twice % 2 == 0) {
        double f = 1;
        for (int k = 2; k < twice / 2; ++k) f *= k;
        return f;
    }
    // Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
    const int k = (twice - 1) / 2;
    double g = std::sqrt(std::numbers::pi);
    for (int j = 1; j <= k; ++j) g *= (2.0 * j - 1.0) / 2.0;
    return g;
}

}  // namespace

double kappa(int q, int delta)
{
    const double qd = q;
    if (delta == 0) return std::sqrt(qd / (2 * std::numbers::pi * std::pow(qd - 1, 3)));
    const auto m = m_sequence(delta);
    const double alpha = (3.0 * delta - 1.0) / 2.0;
    return 1.0 / gamma_half(3 * delta - 1) * 2.0 / (qd * (qd - 1)) * std::pow((qd - 1) / (2 * qd * qd * qd), alpha) *
           std::pow(qd * qd * qd * qd / 4, delta) * m.back().get_d();
}

double log_asymptotic_estimate(int q, int delta, long n)
{
    const double log_zc = (q - 1) * std::log(q - 1.0) - q * std::log(static_cast<double>(q));
    return std::log(kappa(q, delta)) + 1.5 * (delta - 1) * std::log(static_cast<double>(n)) - n * log_zc;
}

double asymptotic_estimate(int q, int delta, long n) { return std::exp(log_asymptotic_estimate(q, delta, n)); }

double estimate_ratio(const Integer& g, int q, int delta, long n)
{
    return std::exp(log_of(g) - log_asymptotic_estimate(q, delta, n));
}

}  // namespace syk
