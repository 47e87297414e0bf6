#pragma once

namespace qshutter {

/// Selects the loop kernel. `serial` is the reference implementation kept for
/// testing; `parallel` distributes independent grid points with OpenMP and
/// falls back to serial when built without it. Both produce identical values.
enum class Execution { serial, parallel };

}  // namespace qshutter
