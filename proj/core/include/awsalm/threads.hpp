#pragma once

namespace awsalm {

// Caps the worker pool for all parallel stages. 0 keeps the default (all
// cores). Results are identical for any setting; only wall time changes.
void set_worker_threads(int n);

int worker_threads();

}  // namespace awsalm
