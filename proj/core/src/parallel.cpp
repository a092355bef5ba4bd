#include "fanbeam/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace fanbeam {

namespace {

int default_thread_count() {
    if (const char* env = std::getenv("FANBEAM_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int> g_thread_count{0}; // 0 = not yet initialized
thread_local bool tl_inside_worker = false;

// Minimal persistent pool: run() hands each worker one chunk index and blocks
// the caller until all chunks finished. The caller executes chunk 0 itself.
class Pool {
public:
    explicit Pool(int workers) {
        for (int i = 0; i < workers; ++i)
            threads_.emplace_back([this, i] { worker_loop(i + 1); });
    }

    ~Pool() {
        {
            std::lock_guard<std::mutex> lk(mtx_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    int workers() const { return static_cast<int>(threads_.size()); }

    void run(const std::function<void(int)>& job) {
        std::lock_guard<std::mutex> serialize(run_mtx_);
        {
            std::lock_guard<std::mutex> lk(mtx_);
            job_ = &job;
            pending_ = workers();
            ++epoch_;
        }
        cv_.notify_all();
        tl_inside_worker = true;
        job(0);
        tl_inside_worker = false;
        std::unique_lock<std::mutex> lk(mtx_);
        done_cv_.wait(lk, [this] { return pending_ == 0; });
        job_ = nullptr;
    }

private:
    void worker_loop(int chunk) {
        tl_inside_worker = true;
        std::uint64_t seen = 0;
        for (;;) {
            const std::function<void(int)>* job = nullptr;
            {
                std::unique_lock<std::mutex> lk(mtx_);
                cv_.wait(lk, [&] { return stop_ || epoch_ != seen; });
                if (stop_) return;
                seen = epoch_;
                job = job_;
            }
            (*job)(chunk);
            {
                std::lock_guard<std::mutex> lk(mtx_);
                if (--pending_ == 0) done_cv_.notify_all();
            }
        }
    }

    std::vector<std::thread> threads_;
    std::mutex run_mtx_;
    std::mutex mtx_;
    std::condition_variable cv_;
    std::condition_variable done_cv_;
    const std::function<void(int)>* job_ = nullptr;
    int pending_ = 0;
    std::uint64_t epoch_ = 0;
    bool stop_ = false;
};

std::mutex g_pool_mtx;
std::unique_ptr<Pool> g_pool;

Pool* pool_for(int extra_workers) {
    std::lock_guard<std::mutex> lk(g_pool_mtx);
    if (!g_pool || g_pool->workers() != extra_workers)
        g_pool = std::make_unique<Pool>(extra_workers);
    return g_pool.get();
}

} // namespace

int thread_count() {
    int n = g_thread_count.load();
    if (n == 0) {
        n = default_thread_count();
        g_thread_count.store(n);
    }
    return n;
}

void set_thread_count(int n) {
    g_thread_count.store(std::max(1, n));
}

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& body) {
    if (begin >= end) return;
    const std::int64_t len = end - begin;
    int chunks = static_cast<int>(std::min<std::int64_t>(thread_count(), len));
    if (chunks <= 1 || tl_inside_worker) {
        body(begin, end);
        return;
    }
    Pool* pool = pool_for(chunks - 1);
    pool->run([&](int c) {
        std::int64_t lo = begin + len * c / chunks;
        std::int64_t hi = begin + len * (c + 1) / chunks;
        if (lo < hi) body(lo, hi);
    });
}

} // namespace fanbeam
