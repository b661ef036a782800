#include "coh/linalg.hpp"

#include <limits>
#include <set>

namespace coh {

// ---------------------------------------------------------------------------
// Echelon over a prime field

Echelon<PrimeField>::Echelon(const PrimeField& field, std::size_t ncols)
    : f_(field), ncols_(ncols), small_(field.p() < (1ull << 32)), acc_(ncols) {}

std::vector<std::uint64_t> Echelon<PrimeField>::row(std::size_t i) const {
    std::vector<std::uint64_t> r(ncols_);
    if (small_) {
        const std::uint32_t* src = data32_.data() + i * ncols_;
        for (std::size_t j = 0; j < ncols_; ++j) r[j] = src[j];
    } else {
        const std::uint64_t* src = data64_.data() + i * ncols_;
        for (std::size_t j = 0; j < ncols_; ++j) r[j] = src[j];
    }
    return r;
}

bool Echelon<PrimeField>::reduce_acc(std::vector<Elem>* coeffs) const {
    const std::uint64_t p = f_.p();
    std::uint64_t* acc = acc_.data();
    if (coeffs) coeffs->assign(pivots_.size(), 0);
    if (small_) {
        const std::uint64_t step = (p - 1) * (p - 1);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - step;
        std::uint64_t bound = std::numeric_limits<std::uint64_t>::max();  // unknown until first reduction
        for (std::size_t j = 0; j < ncols_; ++j) acc[j] %= p;
        bound = p - 1;
        for (std::size_t i = 0; i < pivots_.size(); ++i) {
            const std::size_t c = pivots_[i];
            const std::uint64_t x = acc[c] % p;
            if (x == 0) continue;
            if (coeffs) (*coeffs)[i] = x;
            if (bound > limit) {
                for (std::size_t j = 0; j < ncols_; ++j) acc[j] %= p;
                bound = p - 1;
            }
            const std::uint64_t g = p - x;
            const std::uint32_t* r = data32_.data() + i * ncols_;
            for (std::size_t j = c; j < ncols_; ++j) acc[j] += g * static_cast<std::uint64_t>(r[j]);
            bound += step;
        }
        bool zero = true;
        for (std::size_t j = 0; j < ncols_; ++j) {
            acc[j] %= p;
            if (acc[j]) zero = false;
        }
        return zero;
    }
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
        const std::size_t c = pivots_[i];
        const std::uint64_t x = acc[c];
        if (x == 0) continue;
        if (coeffs) (*coeffs)[i] = x;
        const std::uint64_t* r = data64_.data() + i * ncols_;
        for (std::size_t j = c; j < ncols_; ++j)
            if (r[j]) acc[j] = f_.sub(acc[j], f_.mul(x, r[j]));
    }
    for (std::size_t j = 0; j < ncols_; ++j)
        if (acc[j]) return false;
    return true;
}

bool Echelon<PrimeField>::reduce(std::vector<Elem>& v, std::vector<Elem>* coeffs) const {
    std::copy(v.begin(), v.end(), acc_.begin());
    bool zero = reduce_acc(coeffs);
    std::copy(acc_.begin(), acc_.end(), v.begin());
    return zero;
}

void Echelon<PrimeField>::append_from_acc() {
    std::size_t c = 0;
    while (acc_[c] == 0) ++c;
    const std::uint64_t inv = f_.inv(acc_[c]);
    if (small_) {
        std::size_t base = data32_.size();
        data32_.resize(base + ncols_);
        for (std::size_t j = 0; j < ncols_; ++j) data32_[base + j] = static_cast<std::uint32_t>(j < c ? 0 : f_.mul(acc_[j], inv));
    } else {
        std::size_t base = data64_.size();
        data64_.resize(base + ncols_);
        for (std::size_t j = 0; j < ncols_; ++j) data64_[base + j] = j < c ? 0 : f_.mul(acc_[j], inv);
    }
    pivots_.push_back(c);
}

bool Echelon<PrimeField>::insert(std::vector<Elem> v) { return insert(v.data()); }

bool Echelon<PrimeField>::insert(const Elem* v) {
    std::copy(v, v + ncols_, acc_.begin());
    if (reduce_acc(nullptr)) return false;
    append_from_acc();
    return true;
}

std::vector<std::vector<std::uint64_t>> Echelon<PrimeField>::kernel_basis() const {
    const std::uint64_t p = f_.p();
    const std::size_t r = pivots_.size();
    // Dense copy of the rows in increasing pivot order, then full back-substitution.
    std::vector<std::size_t> order(r);
    for (std::size_t i = 0; i < r; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] < pivots_[b]; });
    std::vector<std::vector<std::uint64_t>> rr(r);
    std::vector<std::size_t> pc(r);
    for (std::size_t k = 0; k < r; ++k) {
        rr[k] = row(order[k]);
        pc[k] = pivots_[order[k]];
    }
    for (std::size_t k = r; k-- > 0;) {
        auto& v = rr[k];
        for (std::size_t l = k + 1; l < r; ++l) {
            const std::uint64_t x = v[pc[l]];
            if (x == 0) continue;
            const auto& w = rr[l];
            for (std::size_t j = pc[l]; j < ncols_; ++j)
                if (w[j]) v[j] = f_.sub(v[j], f_.mul(x, w[j]));
        }
    }
    std::vector<bool> is_pivot(ncols_, false);
    for (auto c : pc) is_pivot[c] = true;
    std::vector<std::vector<std::uint64_t>> basis;
    for (std::size_t j = 0; j < ncols_; ++j) {
        if (is_pivot[j]) continue;
        std::vector<std::uint64_t> v(ncols_, 0);
        v[j] = 1;
        for (std::size_t k = 0; k < r; ++k) v[pc[k]] = rr[k][j] ? p - rr[k][j] : 0;
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Polynomials over Q

namespace {

using QPoly = std::vector<Rational>;

void qtrim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int sign_of(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

QPoly derivative(const QPoly& p) {
    QPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
    qtrim(d);
    return d;
}

QPoly qgcd(QPoly a, QPoly b) {
    qtrim(a);
    qtrim(b);
    while (!b.empty()) {
        QPoly r = qpoly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational l = a.back();
        for (auto& c : a) c /= l;
    }
    return a;
}

}  // namespace

std::vector<Rational> qpoly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    qtrim(r);
    return r;
}

std::vector<Rational> qpoly_rem(std::vector<Rational> a, const std::vector<Rational>& b) {
    qtrim(a);
    if (b.empty()) throw std::invalid_argument("qpoly_rem: zero divisor");
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        Rational c = a.back() / b.back();
        std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= c * b[i];
        a.pop_back();
        qtrim(a);
    }
    return a;
}

std::vector<Rational> qpoly_div_exact(std::vector<Rational> a, const std::vector<Rational>& b) {
    qtrim(a);
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) {
        if (a.empty()) return {};
        throw std::invalid_argument("qpoly_div_exact: not divisible");
    }
    QPoly q(a.size() - db, Rational(0));
    for (std::size_t k = q.size(); k-- > 0;) {
        Rational c = a[k + db] / b.back();
        q[k] = c;
        for (std::size_t i = 0; i <= db; ++i) a[k + i] -= c * b[i];
    }
    qtrim(a);
    if (!a.empty()) throw std::invalid_argument("qpoly_div_exact: not divisible");
    return q;
}

std::vector<Rational> squarefree_part(const std::vector<Rational>& p) {
    QPoly a = p;
    qtrim(a);
    if (a.empty()) throw std::invalid_argument("squarefree_part: zero polynomial");
    QPoly g = qgcd(a, derivative(a));
    QPoly s = qpoly_div_exact(a, g);
    Rational l = s.back();
    for (auto& c : s) c /= l;
    return s;
}

std::size_t real_root_count(const std::vector<Rational>& p) {
    QPoly a = p;
    qtrim(a);
    if (a.empty()) throw std::invalid_argument("real_root_count: zero polynomial");
    std::vector<QPoly> seq{a, derivative(a)};
    while (!seq.back().empty()) {
        QPoly r = qpoly_rem(seq[seq.size() - 2], seq.back());
        for (auto& c : r) c = -c;
        seq.push_back(std::move(r));
    }
    seq.pop_back();
    auto changes = [&](bool at_plus) {
        int prev = 0, count = 0;
        for (const auto& q : seq) {
            int s = sign_of(q.back());
            if (!at_plus && (q.size() - 1) % 2 == 1) s = -s;
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    };
    return static_cast<std::size_t>(changes(false) - changes(true));
}

std::string qpoly_str(const std::vector<Rational>& p, const std::string& var) {
    std::string s;
    for (std::size_t k = p.size(); k-- > 0;) {
        if (p[k] == 0) continue;
        Rational mag = p[k] < 0 ? Rational(-p[k]) : p[k];
        if (s.empty()) {
            if (p[k] < 0) s += "-";
        } else {
            s += p[k] < 0 ? " - " : " + ";
        }
        if (k == 0 || mag != 1) s += mag.get_str();
        if (k > 0) {
            if (mag != 1) s += "*";
            s += var;
            if (k > 1) s += "^" + std::to_string(k);
        }
    }
    return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------
// Sparse elimination

std::size_t sparse_rank(const PrimeField& F, std::size_t ncols, std::vector<SparseRow> rows) {
    std::size_t rank = 0;
    std::vector<std::vector<std::uint32_t>> col_rows(ncols);
    std::set<std::pair<std::size_t, std::size_t>> queue;  // (length, row)
    std::vector<bool> alive(rows.size(), false);
    std::size_t nnz = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& r = rows[i];
        std::sort(r.begin(), r.end());
        // Merge duplicate columns and drop zeros.
        SparseRow m;
        for (const auto& [c, v] : r) {
            if (!m.empty() && m.back().first == c) {
                m.back().second = F.add(m.back().second, v);
                if (m.back().second == 0) m.pop_back();
            } else if (v % F.p() != 0) {
                m.emplace_back(c, v % F.p());
            }
        }
        r = std::move(m);
        if (r.empty()) continue;
        alive[i] = true;
        nnz += r.size();
        queue.insert({r.size(), i});
        for (const auto& e : r) col_rows[e.first].push_back(static_cast<std::uint32_t>(i));
    }
    std::vector<bool> col_done(ncols, false);
    std::size_t active_cols = ncols;
    auto contains = [&](const SparseRow& r, std::uint32_t c) -> const std::uint64_t* {
        auto it = std::lower_bound(r.begin(), r.end(), std::make_pair(c, std::uint64_t{0}));
        if (it != r.end() && it->first == c) return &it->second;
        return nullptr;
    };
    while (!queue.empty()) {
        // Switch to dense elimination once the active block is dense enough.
        if (queue.size() > 64 && active_cols > 0 && nnz * 10 > queue.size() * active_cols) break;
        auto [len, pi] = *queue.begin();
        queue.erase(queue.begin());
        alive[pi] = false;
        SparseRow prow = std::move(rows[pi]);
        nnz -= prow.size();
        std::size_t best = 0;
        for (std::size_t t = 1; t < prow.size(); ++t)
            if (col_rows[prow[t].first].size() < col_rows[prow[best].first].size()) best = t;
        const std::uint32_t pc = prow[best].first;
        const std::uint64_t pinv = F.inv(prow[best].second);
        ++rank;
        col_done[pc] = true;
        --active_cols;
        std::vector<std::uint32_t> targets;
        for (auto ri : col_rows[pc])
            if (alive[ri] && contains(rows[ri], pc)) targets.push_back(ri);
        col_rows[pc].clear();
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (auto ri : targets) {
            auto& r = rows[ri];
            const std::uint64_t factor = F.mul(*contains(r, pc), pinv);
            queue.erase({r.size(), ri});
            nnz -= r.size();
            SparseRow out;
            out.reserve(r.size() + prow.size());
            std::size_t a = 0, b = 0;
            while (a < r.size() || b < prow.size()) {
                if (b == prow.size() || (a < r.size() && r[a].first < prow[b].first)) {
                    out.push_back(r[a++]);
                } else if (a == r.size() || prow[b].first < r[a].first) {
                    std::uint64_t v = F.neg(F.mul(factor, prow[b].second));
                    out.emplace_back(prow[b].first, v);
                    col_rows[prow[b].first].push_back(ri);
                    ++b;
                } else {
                    std::uint64_t v = F.sub(r[a].second, F.mul(factor, prow[b].second));
                    if (v) out.emplace_back(r[a].first, v);
                    ++a;
                    ++b;
                }
            }
            r = std::move(out);
            if (r.empty()) {
                alive[ri] = false;
            } else {
                nnz += r.size();
                queue.insert({r.size(), ri});
            }
        }
    }
    if (queue.empty()) return rank;
    // Dense finish on the remaining active rows and columns.
    std::vector<std::uint32_t> col_map(ncols, 0);
    std::size_t nc = 0;
    for (std::size_t c = 0; c < ncols; ++c)
        if (!col_done[c]) col_map[c] = static_cast<std::uint32_t>(nc++);
    Echelon<PrimeField> ech(F, nc);
    std::vector<std::uint64_t> dense(nc);
    for (const auto& [len, ri] : queue) {
        std::fill(dense.begin(), dense.end(), 0);
        for (const auto& [c, v] : rows[ri]) dense[col_map[c]] = v;
        ech.insert(dense.data());
        if (ech.rank() == nc) break;
    }
    return rank + ech.rank();
}

std::size_t rank_modp(const PrimeField& F, const DenseMatrix<PrimeField>& m) {
    std::size_t nnz = 0;
    for (auto x : m.a)
        if (x) ++nnz;
    if (nnz * 10 < m.rows * m.cols) {
        std::vector<SparseRow> rows(m.rows);
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < m.cols; ++j)
                if (m.at(i, j)) rows[i].emplace_back(static_cast<std::uint32_t>(j), m.at(i, j));
        return sparse_rank(F, m.cols, std::move(rows));
    }
    Echelon<PrimeField> e(F, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) e.insert(m.a.data() + i * m.cols);
    return e.rank();
}

}  // namespace coh
