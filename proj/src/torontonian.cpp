#include "gbsmock/torontonian.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/parallel.hpp"
#include "summation.hpp"

namespace gbsmock {

namespace {

std::string subset_string(std::uint64_t mask, int m) {
    std::string s = "{";
    bool first = true;
    for (int j = 0; j < m; ++j) {
        if (mask >> j & 1) {
            s += (first ? "" : ",") + std::to_string(j);
            first = false;
        }
    }
    return s + "}";
}

// Cholesky factor of b_Z in interleaved order (j, j+m) per selected mode,
// grown and shrunk two rows at a time.
class BorderedCholesky {
  public:
    BorderedCholesky(const ComplexMatrix& b) : b_(b), m_(static_cast<int>(b.rows() / 2)), l_(b.rows(), b.rows()) {
        rows_.reserve(b.rows());
    }

    int size() const { return static_cast<int>(rows_.size()); }

    // Appends mode j; returns the log-det increment. Throws on a non-positive pivot.
    double push(int j, std::uint64_t mask_after) {
        const int p = size();
        const Eigen::Index r0 = j, r1 = j + m_;
        rows_.push_back(r0);
        rows_.push_back(r1);
        // Forward-substitute the new rows: l(p+t, c) for c < p.
        for (int t = 0; t < 2; ++t) {
            const Eigen::Index r = t == 0 ? r0 : r1;
            for (int c = 0; c < p; ++c) {
                Complex v = b_(r, rows_[c]);
                for (int q = 0; q < c; ++q) v -= l_(p + t, q) * std::conj(l_(c, q));
                l_(p + t, c) = v / l_(c, c).real();
            }
        }
        // Schur complement of the 2x2 corner.
        Complex s00 = b_(r0, r0), s10 = b_(r1, r0), s11 = b_(r1, r1);
        for (int q = 0; q < p; ++q) {
            s00 -= l_(p, q) * std::conj(l_(p, q));
            s10 -= l_(p + 1, q) * std::conj(l_(p, q));
            s11 -= l_(p + 1, q) * std::conj(l_(p + 1, q));
        }
        const double d0 = s00.real();
        if (!(d0 > 0.0)) fail(mask_after, d0);
        const double l00 = std::sqrt(d0);
        const Complex l10 = s10 / l00;
        const double d1 = s11.real() - std::norm(l10);
        if (!(d1 > 0.0)) fail(mask_after, d1);
        const double l11 = std::sqrt(d1);
        l_(p, p) = l00;
        l_(p + 1, p) = l10;
        l_(p + 1, p + 1) = l11;
        return 2.0 * (std::log(l00) + std::log(l11));
    }

    void pop() {
        rows_.pop_back();
        rows_.pop_back();
    }

  private:
    [[noreturn]] void fail(std::uint64_t mask, double pivot) const {
        throw DomainError(fmt::format("det(I - A_Z) is not positive for Z = {} (pivot {:.3g})",
                                      subset_string(mask, m_), pivot));
    }

    const ComplexMatrix& b_;
    int m_;
    ComplexMatrix l_;
    std::vector<Eigen::Index> rows_;
};

void check_doubled_hermitian(const ComplexMatrix& b) {
    if (b.rows() != b.cols() || b.rows() % 2 != 0) {
        throw DimensionError(fmt::format("expected a square matrix of even size, got {}x{}", b.rows(), b.cols()));
    }
    if (b.rows() / 2 > 62) throw BudgetError("more than 62 modes in a subset enumeration");
    if (b.size() == 0) return;
    double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    double dev = (b - b.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-10 * scale) {
        throw DomainError(fmt::format("I - A must be Hermitian (max deviation {:.3g})", dev));
    }
}

// DFS over subsets of modes [from, m) extending the factor in `chol`.
void dfs(BorderedCholesky& chol, int from, int m, std::uint64_t mask, double log_det,
         const std::function<void(std::uint64_t, double)>& visit) {
    for (int j = from; j < m; ++j) {
        std::uint64_t next = mask | (std::uint64_t{1} << j);
        double ld = log_det + chol.push(j, next);
        visit(next, ld);
        dfs(chol, j + 1, m, next, ld, visit);
        chol.pop();
    }
}

}  // namespace

void for_each_subset_log_det(const ComplexMatrix& b,
                             const std::function<void(std::uint64_t, double)>& visit) {
    check_doubled_hermitian(b);
    const int m = static_cast<int>(b.rows() / 2);
    visit(0, 0.0);
    BorderedCholesky chol(b);
    dfs(chol, 0, m, 0, 0.0, visit);
}

double torontonian_from_complement(const ComplexMatrix& b) {
    check_doubled_hermitian(b);
    const int m = static_cast<int>(b.rows() / 2);
    if (m == 0) return 1.0;

    // Modes [0, prefix) are fixed per task (included or not), the rest are
    // enumerated inside the task.
    const int prefix = std::min(std::max(0, m - kSerialClicks), 8);
    const std::size_t tasks = std::size_t{1} << prefix;
    std::vector<double> partial(tasks, 0.0);

    parallel_for(tasks, [&](std::size_t task) {
        BorderedCholesky chol(b);
        std::uint64_t mask = 0;
        double log_det = 0.0;
        for (int j = 0; j < prefix; ++j) {
            if (task >> j & 1) {
                mask |= std::uint64_t{1} << j;
                log_det += chol.push(j, mask);
            }
        }
        PairwiseSum sum;
        auto term = [&](std::uint64_t z, double ld) {
            int parity = (m - std::popcount(z)) & 1;
            double t = std::exp(-0.5 * ld);
            sum.add(parity ? -t : t);
        };
        term(mask, log_det);
        dfs(chol, prefix, m, mask, log_det, term);
        partial[task] = sum.total();
    });
    PairwiseSum total;
    for (double p : partial) total.add(p);
    return total.total();
}

double torontonian(const ComplexMatrix& a) {
    if (a.rows() != a.cols() || a.rows() % 2 != 0) {
        throw DimensionError(fmt::format("Torontonian needs a square matrix of even size, got {}x{}", a.rows(), a.cols()));
    }
    ComplexMatrix b = ComplexMatrix::Identity(a.rows(), a.cols()) - a;
    return torontonian_from_complement(b);
}

}  // namespace gbsmock
