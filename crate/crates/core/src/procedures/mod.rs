//! Graph procedures: renormalization certificates and norm descent.

mod descent;
mod renorm;

pub use descent::{default_max_steps, descent_run, descent_step, descent_threshold, DescentTrace};
pub use renorm::{
    renorm_certificate, renorm_path, subcube_connected, CubeBox, FailingPair, LevelOutcome,
    RenormCertificate, RenormPlan,
};
