pub mod asymptotic;
pub mod lemmas;
pub mod script;
pub mod uniform;
