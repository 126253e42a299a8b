#ifndef RSFDE_SRC_FFTW_HANDLE_HPP
#define RSFDE_SRC_FFTW_HANDLE_HPP

#include <fftw3.h>

#include <memory>
#include <mutex>

namespace rsfde::detail {

// The FFTW planner is not thread-safe; plan creation and destruction go
// through this lock. Executing a finished plan on new arrays is safe.
inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwPlanHandle {
    fftw_plan plan = nullptr;

    explicit FftwPlanHandle(fftw_plan p) : plan(p) {}
    FftwPlanHandle(const FftwPlanHandle&) = delete;
    FftwPlanHandle& operator=(const FftwPlanHandle&) = delete;
    ~FftwPlanHandle()
    {
        std::lock_guard lock(fftw_planner_mutex());
        if (plan) fftw_destroy_plan(plan);
    }
};

// FFTW_ESTIMATE keeps plan selection deterministic, so repeated runs give
// bit-identical results. FFTW_UNALIGNED lets plans run on std::vector storage.
inline constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

} // namespace rsfde::detail

#endif
