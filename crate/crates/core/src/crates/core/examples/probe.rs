use dasian_core::analytic::gbm_call;
use dasian_core::market::{MarketParams, StepDrift};
use dasian_core::pde::{price_pde, SolverConfig};
fn main() {
    let drift = StepDrift::constant(1.0, 1.0).unwrap();
    let p = MarketParams::new(0.25, 0.0, 1.0, 1.3).unwrap();
    let exact = gbm_call(0.1, 0.3, 0.25, 1.0).unwrap();
    for m in [256, 512, 1024, 2048] {
        let pde = price_pde(0.0, 1.1, &drift, &p, &SolverConfig::new(m, 128)).unwrap();
        println!("{m} {pde:e} {exact:e} {:e}", (pde-exact)/exact);
    }
}
