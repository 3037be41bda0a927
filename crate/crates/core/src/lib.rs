//! Reduced n-colored Khovanov homology of knots over GF(2).
//!
//! The pipeline cuts a knot diagram open at a marked edge, cables the
//! resulting 1-1 tangle with `n` parallel strands, and builds the cube of
//! resolutions of the cable. A resolution contributes the exterior algebra
//! on its closed circles, or nothing when some arc turns back to the
//! boundary line it started from. Saddles between neighbouring resolutions
//! act by merge and split maps.
//!
//! Modules:
//!
//! * [`diagram`]: PD codes, mirroring, cutting and cabling, the bundled knot table.
//! * [`resolve`]: resolutions, component tracing and saddle classification.
//! * [`khcomplex`]: the bigraded chain complex, its homology and delta-width.
//! * [`gf2`]: sparse and dense linear algebra over GF(2).
//! * [`spectral`]: pages of the spectral sequence of a filtered complex.
//! * [`jonesoracle`]: Kauffman bracket and colored Jones polynomials, used to
//!   check Euler characteristics.
//! * [`jobs`]: batch computations, caching and JSON/CSV reports behind the CLI.

pub mod diagram;
pub mod gf2;
pub mod jobs;
pub mod jonesoracle;
pub mod khcomplex;
pub mod resolve;
pub mod spectral;
