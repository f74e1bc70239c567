//! C ABI surface for qdeform-core. Placeholder; filled in once the core API
//! is complete.
