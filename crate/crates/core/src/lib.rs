pub mod cover;
pub mod dedup;
pub mod definitional;
pub mod egraph;
pub mod expr;
pub mod identity;
pub mod pipeline;
pub mod rules;
pub mod synth;
pub mod verify;
