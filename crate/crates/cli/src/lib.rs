//! Front ends for the vizadvisor recommender: the HTTP session service, the
//! terminal wizard and shared text rendering.

pub mod api;
pub mod render;
pub mod wizard;
