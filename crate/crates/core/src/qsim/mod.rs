//! Dense statevector quantum-circuit simulation: named registers, gates,
//! Born-rule measurement and register-level utilities.

mod gate;
mod layout;
mod state;

pub use gate::{Control, GateOp, Marked};
pub use layout::{index_register_width, RegId, Register, RegisterLayout, DEFAULT_QUBIT_CAP};
pub use state::StateVector;
