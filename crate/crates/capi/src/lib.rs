//! C ABI for the planar egomotion solvers. Placeholder while the core
//! library is under construction.
