pub mod bec;
pub mod fig1;
pub mod fig2;
pub mod fock;
pub mod platform;
pub mod sense;
