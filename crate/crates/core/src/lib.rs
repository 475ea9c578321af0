pub mod abgroup;
pub mod cli;
pub mod curve;
pub mod error;
pub mod finitefield;
pub mod fundgroup;
pub mod groups;
pub mod hassedomain;
pub mod oracle;
