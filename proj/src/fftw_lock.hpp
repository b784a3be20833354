#pragma once

#include <mutex>

namespace gksplit::detail {
// The FFTW planner is not thread-safe; plan creation and destruction take this lock.
std::mutex& fftw_planner_mutex();
}  // namespace gksplit::detail
