//! Sparse GF(2) systems: a matrix with no small dependent row sets, its
//! yes/no instances and the best distinguishing advantage.

use qptest::lin2::{
    distinguishing_advantage, gf2_rank, kwise_check_exact, min_unsat_fraction, sample_no,
    sample_yes, search_hard_matrix, yes_outcomes, Lin2System,
};

fn main() -> qptest::Result<()> {
    let hm = search_hard_matrix(10, 1, 0.6, 3, 5000)?;
    let a = &hm.matrix;
    println!(
        "{}x{} matrix, rank {}, no dependent set of size <= {} (attempts {})",
        a.rows(),
        a.cols(),
        gf2_rank(a),
        hm.subset_size,
        hm.attempts
    );

    let yes = sample_yes(a, 1, 8)?;
    println!("yes instance satisfied by its witness: {}", yes.is_satisfied_by(yes.witness().unwrap()));
    let kw = kwise_check_exact(&yes_outcomes(a), a.rows(), hm.subset_size, usize::MAX, 0);
    println!("{}-wise uniform: {} ({} subsets)", kw.k, kw.passed, kw.subsets_checked);
    for q in 1..=hm.subset_size / 3 {
        let g = distinguishing_advantage(a, q)?;
        println!("q={q}: advantage {}", g.advantage);
    }

    let far = search_hard_matrix(12, 32, 1.0 / 12.0, 1, 100)?;
    let no = sample_no(&far.matrix, 32, 5)?;
    let frac = min_unsat_fraction(&no)?;
    println!("no instance with {} equations: min unsatisfied fraction {frac}", no.rows().len());
    let back = Lin2System::from_text(&no.to_text())?;
    println!("text roundtrip ok: {}", back == no);
    Ok(())
}
