//! IO companion for the fault-tolerant path toolkit: text formats, run
//! reports, parallel solver drivers, and the command-line front end.

pub mod app;
pub mod format;
pub mod par;
pub mod report;
