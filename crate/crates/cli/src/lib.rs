pub mod grid;
pub mod scenario;
pub mod svg;
pub mod sweep;
pub mod verify;
