#pragma once

#include <mutex>

namespace salem::detail {

// The FFTW planner is not thread-safe; every plan create/destroy holds this.
std::mutex& fftw_planner_mutex();

}  // namespace salem::detail
