#include "oscnc/exact.hpp"

#include <gmpxx.h>

#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include "oscnc/errors.hpp"

namespace oscnc::exact {

namespace {

mpz_class binomial_z(unsigned long a, unsigned long b) {
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), a, b);
    return out;
}

// Exact rational from the double value of N (doubles are dyadic rationals).
mpq_class rational_from_double(double N) {
    mpq_class q(N);
    q.canonicalize();
    return q;
}

struct BinomialTable {
    std::vector<std::vector<double>> rows;
    BinomialTable() {
        rows.resize(kBinomialCap + 1);
        for (int a = 0; a <= kBinomialCap; ++a) {
            rows[static_cast<size_t>(a)].resize(static_cast<size_t>(a) + 1);
            for (int b = 0; b <= a; ++b) {
                rows[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                    binomial_z(static_cast<unsigned long>(a),
                               static_cast<unsigned long>(b))
                        .get_d();
            }
        }
    }
};

const BinomialTable& binomial_table() {
    static const BinomialTable table;
    return table;
}

void require_indices(int k, int l, int j) {
    if (k < 0 || l < 0 || j < 0) {
        throw ValidationError("diagonalization entry indices must be >= 0");
    }
    if (k + std::max(l, j) > kBinomialCap) {
        throw CapacityError("diagonalization entry index beyond cap " +
                            std::to_string(kBinomialCap));
    }
}

mpq_class alternating_sum_q(int k, int l, int j, const mpq_class& N) {
    const int imax = std::min(l, j);
    // Common denominator N^imax, accumulated as an exact rational.
    mpq_class sum(0);
    mpq_class inv_N = 1 / N;
    mpq_class npow(1);  // N^-i
    for (int i = 0; i <= imax; ++i) {
        mpq_class term(binomial_z(static_cast<unsigned long>(l),
                                  static_cast<unsigned long>(i)) *
                           binomial_z(static_cast<unsigned long>(j),
                                      static_cast<unsigned long>(i)),
                       binomial_z(static_cast<unsigned long>(k + i),
                                  static_cast<unsigned long>(k)));
        term.canonicalize();
        term *= npow;
        if (i & 1) {
            sum -= term;
        } else {
            sum += term;
        }
        npow *= inv_N;
    }
    return sum;
}

}  // namespace

double binomial(int a, int b) {
    if (b < 0 || b > a) return 0.0;
    if (a > kBinomialCap) {
        throw CapacityError("binomial index " + std::to_string(a) +
                            " beyond cap " + std::to_string(kBinomialCap));
    }
    return binomial_table().rows[static_cast<size_t>(a)][static_cast<size_t>(b)];
}

double alternating_entry_sum(int k, int l, int j, double N) {
    require_indices(k, l, j);
    if (!(N > 0.0)) {
        throw ZeroTemperatureBranchError(
            "alternating_entry_sum: N must be > 0");
    }
    return alternating_sum_q(k, l, j, rational_from_double(N)).get_d();
}

double t_entry(int k, int l, int j, double N) {
    require_indices(k, l, j);
    if (!(N > 0.0)) {
        throw ZeroTemperatureBranchError("t_entry: N must be > 0");
    }
    const mpq_class Nq = rational_from_double(N);
    const mpq_class r = Nq / (Nq + 1);
    mpq_class value = alternating_sum_q(k, l, j, Nq);
    mpq_class rp(1);
    for (int i = 0; i < l; ++i) rp *= r;
    value *= rp;
    return std::sqrt(binomial(k + l, k)) * value.get_d();
}

double t_inv_entry(int k, int l, int j, double N) {
    require_indices(k, l, j);
    if (!(N > 0.0)) {
        throw ZeroTemperatureBranchError("t_inv_entry: N must be > 0");
    }
    const mpq_class Nq = rational_from_double(N);
    mpq_class value = alternating_sum_q(k, l, j, Nq);
    // C(k+l,k) * N^l / (N+1)^(l+k+1)
    mpq_class pref(binomial_z(static_cast<unsigned long>(k + l),
                              static_cast<unsigned long>(k)));
    for (int i = 0; i < l; ++i) pref *= Nq;
    const mpq_class Np1 = Nq + 1;
    for (int i = 0; i < l + k + 1; ++i) pref /= Np1;
    value *= pref;
    return std::sqrt(binomial(k + j, k)) * value.get_d();
}

}  // namespace oscnc::exact
