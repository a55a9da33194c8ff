pub mod analysis;
pub mod numeric;
pub mod schedule;
pub mod tower;
pub mod slicer;
