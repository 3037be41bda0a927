#[rustfmt::skip]
pub mod reference;
