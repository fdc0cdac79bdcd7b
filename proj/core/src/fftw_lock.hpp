#pragma once

#include <mutex>

namespace icf::detail {

// FFTW's planner is not thread-safe; every plan creation and destruction
// goes through this lock.
std::mutex& fftw_planner_mutex();

}  // namespace icf::detail
