//! Upper and lower bounds for partitions of the flat torus into parts of small
//! diameter, together with a verifier that certifies every emitted partition.

pub mod bounds;
pub mod globopt;
pub mod hex;
pub mod json;
pub mod planar;
pub mod region;
pub mod render;
pub mod sat;
pub mod scalar;
pub mod table;
pub mod torus;
pub mod verify;

pub use num_rational::BigRational as Rational;

pub type TorusPoint64 = torus::TorusPoint<f64>;
pub type TorusPoint32 = torus::TorusPoint<f32>;
pub type Polygon64 = region::LiftedPolygon<f64>;
pub type Polygon32 = region::LiftedPolygon<f32>;
pub type Region64 = region::Region<f64>;
pub type Partition64 = region::Partition<f64>;
pub type Partition32 = region::Partition<f32>;
pub type ExactHexSpec = hex::HexTilingSpec<Rational>;
pub type ExactHexOptimum = hex::HexOptimum<Rational>;
pub type Mesh64 = globopt::MeshPartition<f64>;
