pub mod dynamics;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod metrics;
pub mod seeding;
