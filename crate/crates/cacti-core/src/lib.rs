//! Exact-arithmetic models of cacti: configurations of parameterized circles
//! glued along a tree, together with the operad-style compositions they carry.
//!
//! Everything is computed over arbitrary-precision rationals; no floats enter
//! any structural decision. The crate is organised around a small set of
//! interlocking views of the same object:
//!
//! * [`cactus`]: the canonical tree-with-arc-lengths representation and the
//!   perimeter-word machinery that drives gluing, rotation and degeneration.
//! * [`graph`]: ribbon graphs with markings and metrics, and the translation
//!   between cacti and marked treelike ribbon graphs.
//! * [`operad`]: generic quasi-operad instances, permutation plumbing, law
//!   checkers, and (semi)direct/bi-crossed product constructions.
//! * [`compose`]: the four gluing variants on cacti, the circle action, the
//!   twisted/perturbed compositions and the structure maps between varieties.
//! * [`cells`]: the cell complexes spanned by normalized spineless cacti,
//!   their boundary operators and integral homology.
//! * [`diagrams`]: dual trees, chord diagrams, completed chord diagrams and
//!   arc systems, plus deterministic renderers.

pub mod angle;
pub mod cactus;
pub mod cells;
pub mod compose;
pub mod diagrams;
pub mod graph;
pub mod operad;
pub mod rational;
pub mod render;
pub mod sample;

pub use angle::Angle;
pub use cactus::{Cactus, TopType, Variety};
pub use rational::Q;
