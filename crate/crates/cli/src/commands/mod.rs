pub mod bounds;
pub mod conc;
pub mod holevo;
pub mod oracle;
pub mod pack;
pub mod pdf;
pub mod sample;
