pub mod moments;
pub mod reproduce;
pub mod simulate;
pub mod table;
