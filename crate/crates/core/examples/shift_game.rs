//! The shift-game reduction: stretched tuples, the reduction protocol with
//! an exact and a coin-flip black box, and the independence check.

use ctxlab::experiments::{play_games, stretch_figure1};
use ctxlab::primitives::SortedTuple;
use ctxlab::reductions::{verify_indep_coord, CoinFlip, ExactSubsetMajority, Pi1Params, Side, StretchParams};

fn main() -> ctxlab::Result<()> {
    let (_, text) = stretch_figure1(0)?;
    print!("{text}");

    // a small parameter set so the games finish quickly
    let d = Pi1Params { epsilon: 0.25, delta_prime: 0.05, ell: 100, eta: 0.2, universe: Some(8) }.derive()?;
    println!("t = {}, r = {}, a = {}, k = {}", d.t, d.r, d.a, d.k);
    for side in [Side::Prefix, Side::Suffix] {
        let exact = play_games(&d, &ExactSubsetMajority, side, 100, 1)?;
        let coin = play_games(&d, &CoinFlip, side, 100, 2)?;
        println!("{side:?}: exact {}/100 correct, coin flip {}/100 YES", exact.correct, coin.yes);
    }

    let sigma = SortedTuple::new(vec![1, 3], 3)?;
    let sp = StretchParams { r: 2, a: 1, d: 3 };
    for side in [Side::Prefix, Side::Suffix] {
        println!("independence {side:?}: {}", verify_indep_coord(&sigma, &sp, side, 1 << 20)?);
    }
    Ok(())
}
