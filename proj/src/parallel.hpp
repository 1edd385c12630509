#pragma once

#include "favar/model.hpp"

#include <exception>

namespace favar::detail {

// Runs body(i) for i in [first, last) across OpenMP threads. Exceptions cannot
// cross the parallel region, so the first one is captured and rethrown.
template <class Body>
void parallel_for(Index first, Index last, Body&& body) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (Index i = first; i < last; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(favar_parallel_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace favar::detail
