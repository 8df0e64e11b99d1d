//! Route planning and online routing for QKD networks.
//!
//! * [`net`] and [`paths`]: the network model and simple-path enumeration.
//! * [`plan`]: exact fair allocation of contracts (one path each, integer grants).
//! * [`online`]: request-by-request routing with the SAP and WSP strategies.
//! * [`oracle`]: the offline optimum and exact competitive ratios.
//! * [`adversary`]: worst-case instances for both strategies.
//! * [`io`]: JSON documents and run configuration.

pub mod adversary;
pub mod io;
pub mod net;
pub mod online;
pub mod oracle;
pub mod paths;
pub mod plan;
pub mod random;
pub mod rational;

pub use net::{Edge, Network, NodeId, Path};
