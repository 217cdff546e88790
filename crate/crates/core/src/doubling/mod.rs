//! The doubling method for `G = GL_1`, `G□ = GL_2` over `Q_p`, `p` odd.
//!
//! `G x G` sits in `GL_2` through the basis `f1 = (1, 1)`, `f2 = (1, -1)`,
//! `P` is the upper triangular Borel and `Delta(s) = a/d`. Sections of
//! `I(X, omega)` are stored by their values on `K = GL_2(Z_p)` modulo the
//! principal congruence subgroup `K(m)`, i.e. on `P^1(Z/p^m)`.

mod engine;
mod intertwine;
mod matrix;
mod section;
mod zeta;

pub use engine::{gamma_extract, normalize_gamma, normalized_gamma, Engine, GammaReport};
pub use intertwine::{intertwine, intertwine_eval, intertwine_kernel, target_space};
pub use matrix::{delta_valuation, embed_double, embed_pair, iwasawa, Iwasawa, Mat2};
pub use section::{locate, point_count, point_rep, section_eval, Induced, Locus, Section};
pub use zeta::{shell_weights, zeta_exact, zeta_kernel, zeta_truncated, Kernel, PiChar, ZetaValue};
