pub mod cli;
pub mod dga;
pub mod fixtures;
pub mod gf2;
pub mod homology;
pub mod massey;
pub mod oracle;
