//! Quantum and classical k-star testers on one far instance, with their
//! query bills.

use num_rational::Ratio;
use qptest::graph::{OracleView, PatternGraph};
use qptest::instances::{gen_far_h_instance, gen_h_free_instance, FillerOptions};
use qptest::testers::{
    make_schedule, test_h_freeness_classical, test_h_freeness_quantum, GroverModel,
};

fn main() -> qptest::Result<()> {
    let (n, k, eps) = (4096, 3, 0.05);
    let star = PatternGraph::k_star(k);
    let schedule = make_schedule(k, n)?;
    println!("schedule t_i: {:?}", (1..=k).map(|i| schedule.t(i)).collect::<Vec<_>>());

    let (far, _) = gen_far_h_instance(n, 2, &star, eps, 11)?;
    let model = GroverModel::new(Ratio::from_integer(3), 0.9, 5)?;

    let mut view = OracleView::new(&far);
    let q = test_h_freeness_quantum(&mut view, &star, eps, &model)?;
    println!(
        "quantum:   {:?}, classical {} + charged {} queries, witness {:?}",
        q.verdict, q.queries_classical, q.queries_charged, q.witness
    );

    let mut view = OracleView::new(&far);
    let c = test_h_freeness_classical(&mut view, &star, eps, 5)?;
    println!("classical: {:?}, {} queries", c.verdict, c.total_queries());

    let free = gen_h_free_instance(n, 2, &star, 11, FillerOptions::default())?;
    let mut view = OracleView::new(&free);
    let f = test_h_freeness_quantum(&mut view, &star, eps, &model)?;
    println!("free instance: {:?} after {} queries", f.verdict, f.total_queries());
    Ok(())
}
