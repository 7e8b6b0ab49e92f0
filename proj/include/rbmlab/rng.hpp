#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rbmlab {

// splitmix64 step, used to derive well-separated stream seeds
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-stream engine: stream `id` of a run seeded with `seed`
// sees the same sequence regardless of how many other streams exist.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t id) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (id + 1));
    return std::mt19937_64(splitmix64(s));
}

struct MCEstimate {
    std::complex<double> mean{0.0, 0.0};
    double se_re = 0.0;
    double se_im = 0.0;
    long n_samples = 0;
    double ess = 0.0;        // effective sample size, reweighted estimators only
    bool flagged = false;    // weight degeneracy / capacity warning
};

// Batch-means accumulator for one complex observable. Samples are assigned
// to batches by global index, so the estimate does not depend on how the
// index range was split across workers.
class BatchAccumulator {
public:
    explicit BatchAccumulator(long n_total, int n_batches = 100)
        : n_total_(n_total),
          n_batches_(int(std::min<long>(n_batches, std::max<long>(n_total, 1)))),
          sum_(n_batches_, {0.0, 0.0}),
          count_(n_batches_, 0) {}

    void add(long index, std::complex<double> v) {
        int b = int(index * n_batches_ / n_total_);
        sum_[size_t(b)] += v;
        abs2_ += std::norm(v);
        ++count_[size_t(b)];
    }

    void merge(const BatchAccumulator& o) {
        for (int b = 0; b < n_batches_; ++b) {
            sum_[size_t(b)] += o.sum_[size_t(b)];
            count_[size_t(b)] += o.count_[size_t(b)];
        }
        abs2_ += o.abs2_;
    }

    MCEstimate estimate() const {
        MCEstimate e;
        long n = 0;
        std::complex<double> tot{0.0, 0.0};
        for (int b = 0; b < n_batches_; ++b) { n += count_[size_t(b)]; tot += sum_[size_t(b)]; }
        e.n_samples = n;
        if (n == 0) return e;
        e.mean = tot / double(n);
        int used = 0;
        double vr = 0.0, vi = 0.0;
        for (int b = 0; b < n_batches_; ++b) {
            if (count_[size_t(b)] == 0) continue;
            std::complex<double> m = sum_[size_t(b)] / double(count_[size_t(b)]);
            double wr = m.real() - e.mean.real();
            double wi = m.imag() - e.mean.imag();
            vr += wr * wr;
            vi += wi * wi;
            ++used;
        }
        if (used > 1) {
            e.se_re = std::sqrt(vr / (used - 1) / used);
            e.se_im = std::sqrt(vi / (used - 1) / used);
        }
        // |sum v|^2 / sum |v|^2: n for constant samples, small under phase cancellation
        if (abs2_ > 0.0) e.ess = std::norm(tot) / abs2_;
        return e;
    }

    // raw per-batch sums, for ratio estimators built on shared batches
    int batches() const { return n_batches_; }
    std::complex<double> batch_sum(int b) const { return sum_[size_t(b)]; }
    long batch_count(int b) const { return count_[size_t(b)]; }

private:
    long n_total_;
    int n_batches_;
    std::vector<std::complex<double>> sum_;
    std::vector<long> count_;
    double abs2_ = 0.0;
};

// Fixed-size bank of batch accumulators for vector-valued observables.
class MultiBatchAccumulator {
public:
    MultiBatchAccumulator(int k, long n_total, int n_batches = 100)
        : acc_(size_t(k), BatchAccumulator(n_total, n_batches)) {}

    void add(int slot, long index, std::complex<double> v) { acc_[size_t(slot)].add(index, v); }
    void merge(const MultiBatchAccumulator& o) {
        for (size_t i = 0; i < acc_.size(); ++i) acc_[i].merge(o.acc_[i]);
    }
    MCEstimate estimate(int slot) const { return acc_[size_t(slot)].estimate(); }
    const BatchAccumulator& slot(int s) const { return acc_[size_t(s)]; }
    int slots() const { return int(acc_.size()); }

private:
    std::vector<BatchAccumulator> acc_;
};

// Runs `fn(rng, index, acc, worker)` for index in [0, n_samples) split into
// contiguous chunks, one per worker, each with its own derived stream. Chunks
// run concurrently when n_workers > 1; partial accumulators are merged in
// worker order, so results depend only on (seed, n_workers).
template <class Acc, class Fn>
Acc parallel_mc(long n_samples, int n_workers, std::uint64_t seed, const Acc& zero, Fn&& fn) {
    if (n_workers < 1) throw std::invalid_argument("parallel_mc: n_workers must be >= 1");
    if (n_samples < 0) throw std::invalid_argument("parallel_mc: n_samples must be >= 0");
    std::vector<Acc> parts(size_t(n_workers), zero);
    auto run_chunk = [&](int w) {
        long lo = n_samples * w / n_workers;
        long hi = n_samples * (w + 1) / n_workers;
        auto rng = make_stream(seed, std::uint64_t(w));
        for (long i = lo; i < hi; ++i) fn(rng, i, parts[size_t(w)], w);
    };
    if (n_workers == 1) {
        run_chunk(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(size_t(n_workers));
        for (int w = 0; w < n_workers; ++w) threads.emplace_back(run_chunk, w);
        for (auto& t : threads) t.join();
    }
    Acc out = parts[0];
    for (int w = 1; w < n_workers; ++w) out.merge(parts[size_t(w)]);
    return out;
}

// Resolves the worker count: explicit flag > RBM_LAB_WORKERS > fallback.
int resolve_workers(int flag_value);

}  // namespace rbmlab
