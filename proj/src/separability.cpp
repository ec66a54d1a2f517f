#include "nnrepr/separability.hpp"

#include "nnrepr/error.hpp"

namespace nnrepr {

namespace {

// Margin constraint for input k: coefficients over (w_1..w_n, b) and its right-hand side.
//   f(X) = 1:   w.X - b >= 0
//   f(X) = 0:  -w.X + b >= 1
struct MarginRow {
    std::vector<int> coeffs;
    int rhs;
};

MarginRow margin_row(const TruthTable& table, std::uint64_t k) {
    const std::size_t n = table.arity();
    const bool one = table.get(k);
    MarginRow row{std::vector<int>(n + 1), one ? 0 : 1};
    const int sign = one ? 1 : -1;
    for (std::size_t j = 0; j < n; ++j) {
        if ((k >> (n - 1 - j)) & 1u) row.coeffs[j] = sign;
    }
    row.coeffs[n] = -sign;
    return row;
}

// Phase-1 simplex for { y >= 0 : G y = e } with G = [A^T; r^T] and e = (0,...,0,1).
// The system is feasible iff the margin constraints A z >= r are infeasible
// (Farkas). Pivoting uses Bland's rule, so degenerate steps cannot cycle.
class FarkasSimplex {
public:
    explicit FarkasSimplex(const TruthTable& table)
        : m_(table.size()), rows_(table.arity() + 2), cols_(m_ + rows_) {
        tableau_.assign(rows_, RationalVector(cols_ + 1));
        for (std::uint64_t j = 0; j < m_; ++j) {
            auto row = margin_row(table, j);
            for (std::size_t i = 0; i + 1 < rows_; ++i) tableau_[i][j] = row.coeffs[i];
            tableau_[rows_ - 1][j] = row.rhs;
        }
        basis_.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            tableau_[i][m_ + i] = 1;
            basis_[i] = m_ + i;
        }
        tableau_[rows_ - 1][cols_] = 1;

        // Objective: minimize the sum of artificials. Reduced costs start at
        // minus the column sums over the structural columns.
        reduced_.assign(cols_, Rational());
        for (std::uint64_t j = 0; j < m_; ++j) {
            Rational sum;
            for (std::size_t i = 0; i < rows_; ++i) sum += tableau_[i][j];
            reduced_[j] = -sum;
        }
        objective_ = 1;
    }

    void solve() {
        for (;;) {
            std::size_t entering = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (reduced_[j].sign() < 0) {
                    entering = j;
                    break;
                }
            }
            if (entering == cols_) return;

            std::size_t leaving = rows_;
            Rational best_ratio;
            for (std::size_t i = 0; i < rows_; ++i) {
                const Rational& a = tableau_[i][entering];
                if (a.sign() <= 0) continue;
                Rational ratio = tableau_[i][cols_] * Rational(a.den(), a.num());
                if (leaving == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leaving])) {
                    leaving = i;
                    best_ratio = std::move(ratio);
                }
            }
            // Phase 1 is bounded below by zero, so a pivot row always exists.
            pivot(leaving, entering);
        }
    }

    bool farkas_feasible() const { return objective_.is_zero(); }

    RationalVector farkas_solution() const {
        RationalVector y(m_);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < m_) y[basis_[i]] = tableau_[i][cols_];
        }
        return y;
    }

    // Simplex multipliers of the optimal basis, read off the artificial columns
    // (cost 1 each): pi_i = 1 - reduced cost. They satisfy G^T pi <= 0 with
    // pi_last = optimum > 0, so z = -pi[0..d) / pi_last solves A z >= r.
    ThresholdWitness separating_witness() const {
        RationalVector pi(rows_);
        for (std::size_t i = 0; i < rows_; ++i) pi[i] = Rational(1) - reduced_[m_ + i];
        const Rational& scale = pi[rows_ - 1];
        Rational inv_neg(-scale.den(), scale.num());
        ThresholdWitness witness;
        for (std::size_t i = 0; i + 2 < rows_; ++i) witness.weights.push_back(pi[i] * inv_neg);
        witness.bias = pi[rows_ - 2] * inv_neg;
        return witness;
    }

private:
    void pivot(std::size_t r, std::size_t q) {
        RationalVector& prow = tableau_[r];
        const Rational inv(prow[q].den(), prow[q].num());
        for (auto& v : prow) {
            if (!v.is_zero()) v *= inv;
        }
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r || tableau_[i][q].is_zero()) continue;
            const Rational factor = tableau_[i][q];
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (!prow[j].is_zero()) tableau_[i][j] -= factor * prow[j];
            }
        }
        const Rational factor = reduced_[q];
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!prow[j].is_zero()) reduced_[j] -= factor * prow[j];
        }
        objective_ += factor * prow[cols_];
        basis_[r] = q;
    }

    std::uint64_t m_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<RationalVector> tableau_;
    std::vector<std::size_t> basis_;
    RationalVector reduced_;
    Rational objective_;
};

}  // namespace

SeparabilityCertificate is_linear_threshold(const TruthTable& table) {
    if (table.arity() > kMaxSeparabilityWidth) {
        throw Error(ErrorKind::resource_limit, "separability check supports at most " +
                                                   std::to_string(kMaxSeparabilityWidth) + " inputs, got " +
                                                   std::to_string(table.arity()));
    }
    FarkasSimplex simplex(table);
    simplex.solve();
    SeparabilityCertificate cert;
    if (simplex.farkas_feasible()) {
        cert.separable = false;
        cert.infeasibility = simplex.farkas_solution();
        if (!check_infeasibility(table, *cert.infeasibility)) {
            throw Error(ErrorKind::structural, "internal error: infeasibility certificate failed its re-check");
        }
    } else {
        cert.separable = true;
        cert.witness = simplex.separating_witness();
        if (!check_witness(table, *cert.witness)) {
            throw Error(ErrorKind::structural, "internal error: separating witness failed its re-check");
        }
    }
    return cert;
}

bool check_witness(const TruthTable& table, const ThresholdWitness& witness) {
    const std::size_t n = table.arity();
    if (witness.weights.size() != n) return false;
    for (std::uint64_t k = 0; k < table.size(); ++k) {
        Rational dot;
        for (std::size_t j = 0; j < n; ++j) {
            if ((k >> (n - 1 - j)) & 1u) dot += witness.weights[j];
        }
        if (table.get(k) ? dot < witness.bias : dot > witness.bias - 1) return false;
    }
    return true;
}

bool check_infeasibility(const TruthTable& table, const RationalVector& multipliers) {
    if (multipliers.size() != table.size()) return false;
    const std::size_t n = table.arity();
    RationalVector combined(n + 1);
    Rational rhs;
    for (std::uint64_t k = 0; k < table.size(); ++k) {
        const Rational& y = multipliers[k];
        if (y.sign() < 0) return false;
        if (y.is_zero()) continue;
        auto row = margin_row(table, k);
        for (std::size_t i = 0; i <= n; ++i) {
            if (row.coeffs[i] != 0) combined[i] += y * Rational(row.coeffs[i]);
        }
        rhs += y * Rational(row.rhs);
    }
    for (const auto& c : combined) {
        if (!c.is_zero()) return false;
    }
    return rhs.sign() > 0;
}

}  // namespace nnrepr
