//! Seeded streams and labelled forks.
//!
//! A fork depends only on the parent seed and its label, so stages can draw
//! independently and in any order without disturbing each other.

use bioblend::{RandomStream, Result};

fn main() -> Result<()> {
    let mut root = RandomStream::new(7);
    let mut a = root.fork("locations")?;
    let mut b = root.fork("noise")?;
    println!("locations: {:.4?}", a.draw_normal(0.0, 1.0, 4)?);
    println!("noise:     {:.4?}", b.draw_normal(0.0, 1.0, 4)?);

    // Same seed and label give the same draws.
    let mut again = RandomStream::new(7).fork("locations")?;
    println!("again:     {:.4?}", again.draw_normal(0.0, 1.0, 4)?);

    let mut s = RandomStream::new(1);
    println!("uniform [2, 5):  {:.3?}", s.draw_uniform(2.0, 3.0, 3)?);
    println!("dirichlet(1, 4): {:.3?}", s.draw_dirichlet(1.0, 4)?);
    println!("dice:            {:?}", s.draw_discrete_uniform(1, 6, 8)?);
    println!("3 of 10:         {:?}", s.choose_distinct(10, 3)?);
    Ok(())
}
