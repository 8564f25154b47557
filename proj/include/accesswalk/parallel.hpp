#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace accesswalk {

/// Worker count for a request; 0 means hardware concurrency.
inline unsigned resolve_threads(unsigned requested)
{
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs task(i) for i in [0, count) on `threads` workers and hands each result
/// to deliver(i, result) on the calling thread in ascending i. Workers stay at
/// most a small window ahead of delivery, bounding buffered results. The first
/// exception thrown by a task or by deliver is rethrown after all workers stop.
template <class Task, class Deliver>
void ordered_parallel(std::size_t count, unsigned threads, Task&& task, Deliver&& deliver)
{
    threads = resolve_threads(threads);
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) deliver(i, task(i));
        return;
    }

    using Result = decltype(task(std::size_t{}));
    const std::size_t window = 4 * static_cast<std::size_t>(threads);

    std::mutex mutex;
    std::condition_variable ready;    // a result landed, or a worker failed
    std::condition_variable advance;  // delivery moved forward
    std::map<std::size_t, Result> finished;
    std::size_t next_task = 0;
    std::size_t delivered = 0;
    bool stop = false;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::size_t i;
            {
                std::unique_lock lock(mutex);
                advance.wait(lock, [&] {
                    return stop || next_task >= count || next_task < delivered + window;
                });
                if (stop || next_task >= count) return;
                i = next_task++;
            }
            try {
                Result r = task(i);
                std::lock_guard lock(mutex);
                finished.emplace(i, std::move(r));
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                stop = true;
                advance.notify_all();
            }
            ready.notify_one();
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

    try {
        while (delivered < count) {
            std::optional<Result> r;
            {
                std::unique_lock lock(mutex);
                ready.wait(lock, [&] { return failure || finished.contains(delivered); });
                if (failure) break;
                auto node = finished.extract(delivered);
                r.emplace(std::move(node.mapped()));
            }
            deliver(delivered, std::move(*r));
            {
                std::lock_guard lock(mutex);
                ++delivered;
            }
            advance.notify_all();
        }
    } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
    }
    {
        std::lock_guard lock(mutex);
        stop = true;
    }
    advance.notify_all();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace accesswalk
