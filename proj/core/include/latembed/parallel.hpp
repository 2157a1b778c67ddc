#ifndef LATEMBED_PARALLEL_HPP
#define LATEMBED_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <span>

namespace latembed {

/* Sum with a fixed pairwise tree. The tree depends only on the element
   order and count, never on how many workers computed the elements, so
   reductions are bit-identical across worker counts. */
double pairwise_sum(std::span<const double> values);

// Run body(i) for i in [0, count) on `threads` workers, static block
// partition. threads <= 1 runs inline. Exceptions from workers are
// rethrown on the calling thread (first one wins).
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace latembed

#endif
