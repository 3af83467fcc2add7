// SPDX-License-Identifier: Apache-2.0
//! \file momlat/parallel.hpp
//! Replica-parallel execution with thread-count independent reductions.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace momlat
{
//! Replicas per reduction chunk; fixed so results ignore the thread count.
inline constexpr std::uint64_t kChunkSize = 512;

//! Thread count from MOMLAT_THREADS, else the hardware concurrency.
unsigned default_threads();

/*!
 * Run `fn(replica, acc)` for replicas [0, n_reps) and merge the results.
 *
 * Replicas are grouped into fixed chunks of kChunkSize; each chunk folds its
 * replicas in index order into a copy of `proto`, and chunks are merged in
 * index order. The result is therefore bit-identical for any thread count.
 * `Acc` needs a `merge(Acc const&)` member.
 */
template<class Acc, class Fn>
Acc reduce_replicas(std::uint64_t n_reps, unsigned threads, Acc const& proto,
                    Fn&& fn)
{
    std::uint64_t const n_chunks = (n_reps + kChunkSize - 1) / kChunkSize;
    std::vector<Acc> partial(n_chunks, proto);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try
        {
            for (std::uint64_t c = next++; c < n_chunks; c = next++)
            {
                std::uint64_t const end = std::min(n_reps, (c + 1) * kChunkSize);
                for (std::uint64_t r = c * kChunkSize; r < end; ++r)
                    fn(r, partial[c]);
            }
        }
        catch (...)
        {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = n_chunks;
        }
    };

    unsigned const n_threads = static_cast<unsigned>(std::max<std::uint64_t>(
        1, std::min<std::uint64_t>(threads == 0 ? 1 : threads, n_chunks)));
    if (n_threads == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    Acc total = proto;
    for (auto const& p : partial)
        total.merge(p);
    return total;
}

}  // namespace momlat
