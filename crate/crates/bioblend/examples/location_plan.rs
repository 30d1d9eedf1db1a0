//! Class locations for hidden features, and how ordering and sharing
//! extents change them.

use bioblend::location::{make_locations, make_usefulness, Envelope, SchemeKind, UsefulnessScheme};
use bioblend::{RandomStream, Result};

fn main() -> Result<()> {
    let env = Envelope::standard_normal();
    for kind in [SchemeKind::Linear, SchemeKind::Exponential, SchemeKind::Longtailed] {
        let scheme = UsefulnessScheme::new(kind, 0.2, 1.0)?;
        println!("{kind:>11} usefulness: {:.3?}", make_usefulness(&scheme, 6, 2));
    }

    let scheme = UsefulnessScheme::new(SchemeKind::Linear, 0.2, 1.0)?;
    let classes = 8;
    for (ordering, sharing) in [(0, 0), (classes, 0), (0, 3), (0, classes)] {
        let plan = make_locations(&mut RandomStream::new(3), &env, &scheme, classes, 2, 1, ordering, sharing)?;
        println!("\nordering {ordering}, sharing {sharing} (rows are classes; last column is fake)");
        for row in plan.locations.rows() {
            println!("  {:>7.3?}", row.to_vec());
        }
    }
    Ok(())
}
