#include "coh/cohomology.hpp"

#include <algorithm>
#include <set>
#include <thread>

namespace coh {

namespace {

template <class F>
ModuleAction<F> action_from_images(const F& f, const std::vector<Mat2<typename F::Elem>>& img,
                                   const std::vector<Mat2<typename F::Elem>>& cimg, int n, int m) {
    ModuleAction<F> act{f, n, m, 1, {}, {}};
    for (std::size_t g = 0; g < img.size(); ++g) {
        BlockMap<F> b{{0}, {img[g]}, {cimg[g]}};
        act.inv_gens.push_back(block_inverse(f, b));
        act.gens.push_back(std::move(b));
    }
    return act;
}

void check_weights(const MatrixGroupPresentation& p, int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("weights must be non-negative");
    if (p.projective && (n + m) % 2 != 0)
        throw OddWeight("E_{n,m} with n+m odd does not factor through PSL(2)");
}

SparseRow to_sparse(const std::uint64_t* row, std::size_t cols) {
    SparseRow r;
    for (std::size_t j = 0; j < cols; ++j)
        if (row[j]) r.emplace_back(static_cast<std::uint32_t>(j), row[j]);
    return r;
}

}  // namespace

ModuleAction<PrimeField> build_action(const MatrixGroupPresentation& p, int n, int m, const ReductionMap& r) {
    check_weights(p, n, m);
    return action_from_images(r.field(), reduce_images(p, r, false), reduce_images(p, r, true), n, m);
}

ModuleAction<TowerField> build_action_exact(const MatrixGroupPresentation& p, int n, int m) {
    check_weights(p, n, m);
    return action_from_images(TowerField{p.ring}, p.images, p.conj_images, n, m);
}

std::size_t h1_dimension(const MatrixGroupPresentation& p, const ModuleAction<PrimeField>& act) {
    const PrimeField& f = act.field;
    const std::size_t D = act.dim(), s = act.num_generators(), cols = s * D;
    std::vector<std::uint64_t> buf;

    // Dense elimination unless the system is large and sparse (induced modules).
    bool sparse = false;
    bool decided = false;
    Echelon<PrimeField> lam(f, cols);
    std::vector<SparseRow> srows;
    for (const auto& r : p.relators) {
        buf.assign(D * cols, 0);
        fox_accumulate(act, r, buf);
        if (!decided) {
            std::size_t nnz = 0;
            for (auto x : buf) nnz += x != 0;
            sparse = cols > 600 && nnz * 10 < buf.size();
            decided = true;
        }
        for (std::size_t i = 0; i < D; ++i) {
            const std::uint64_t* row = buf.data() + i * cols;
            if (sparse) {
                auto sr = to_sparse(row, cols);
                if (!sr.empty()) srows.push_back(std::move(sr));
            } else if (lam.rank() < cols) {
                lam.insert(row);
            }
        }
    }
    const std::size_t rank_lambda = sparse ? sparse_rank(f, cols, std::move(srows)) : lam.rank();

    std::size_t rank_mu;
    auto mu = mu_rows(act);
    if (sparse) {
        std::vector<SparseRow> mrows;
        for (const auto& row : mu) {
            auto sr = to_sparse(row.data(), cols);
            if (!sr.empty()) mrows.push_back(std::move(sr));
        }
        rank_mu = sparse_rank(f, cols, std::move(mrows));
    } else {
        Echelon<PrimeField> e(f, cols);
        for (const auto& row : mu) e.insert(row.data());
        rank_mu = e.rank();
    }
    return cols - rank_lambda - rank_mu;
}

std::optional<DimResult> min_over_maps(const MatrixGroupPresentation& p, std::uint64_t x,
                                       const std::function<std::optional<std::size_t>(const ReductionMap&)>& eval,
                                       const DimOptions& opt) {
    struct Job {
        ReductionMap map;
        std::optional<std::size_t> value;
    };
    std::vector<Job> jobs;
    for (std::uint64_t q : primes_up_to(x)) {
        if (q < opt.min_prime) continue;
        std::set<std::vector<std::uint64_t>> seen;
        for (auto& r : admissible_maps(p, q)) {
            if (opt.dedupe_conjugates && seen.count(r.conj_roots)) continue;
            seen.insert(r.roots);
            jobs.push_back({std::move(r), std::nullopt});
        }
    }
    if (jobs.empty()) return std::nullopt;

    const std::size_t T = std::max(1u, opt.threads);
    std::size_t done = 0;
    bool stop = false;
    while (done < jobs.size() && !stop) {
        const std::size_t end = std::min(jobs.size(), done + T);
        if (T == 1) {
            jobs[done].value = eval(jobs[done].map);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t i = done; i < end; ++i) pool.emplace_back([&, i] { jobs[i].value = eval(jobs[i].map); });
            for (auto& t : pool) t.join();
        }
        for (std::size_t i = done; i < end; ++i) {
            if (opt.lower_bound && jobs[i].value && *jobs[i].value <= *opt.lower_bound) {
                // Later results in the same chunk are dropped so the outcome
                // is the same for every thread count.
                jobs.resize(i + 1);
                stop = true;
                break;
            }
        }
        done = std::min(end, jobs.size());
    }
    jobs.resize(std::min(done, jobs.size()));

    DimResult res;
    bool any = false;
    for (const auto& j : jobs) {
        if (!j.value) continue;
        ++res.maps_evaluated;
        if (!any || *j.value < res.dim) {
            res.dim = *j.value;
            res.witnesses.clear();
            any = true;
        }
        if (*j.value == res.dim &&
            (res.witnesses.empty() || res.witnesses.back() != j.map.p))
            res.witnesses.push_back(j.map.p);
    }
    if (!any) return std::nullopt;
    return res;
}

std::optional<DimResult> h1_dim_upto(const MatrixGroupPresentation& p, int n, int m, std::uint64_t x,
                                     DimOptions opt) {
    check_weights(p, n, m);
    // Swapping the tensor factors identifies the modules for r and its conjugate.
    if (n != m) opt.dedupe_conjugates = false;
    return min_over_maps(
        p, x,
        [&](const ReductionMap& r) -> std::optional<std::size_t> {
            return h1_dimension(p, build_action(p, n, m, r));
        },
        opt);
}

}  // namespace coh
