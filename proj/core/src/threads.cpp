#include "awsalm/threads.hpp"

#include "internal_util.hpp"

namespace awsalm {

void set_worker_threads(int n) { detail::set_num_threads(n); }

int worker_threads() { return detail::max_threads(); }

}  // namespace awsalm
