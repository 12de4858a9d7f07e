pub mod numeric;
pub mod poly;
pub mod biquad;
pub mod maps;
pub mod periodic;
pub mod julia;
pub mod variety;
