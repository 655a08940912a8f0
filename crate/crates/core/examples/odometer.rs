//! The base-3 odometer on lazy digit streams, and its add-two orbit.

use f2_ergodic::ball::{DigitStream, Direction, DEFAULT_LOOKAHEAD};

fn show(d: &DigitStream) -> String {
    d.prefix(6).iter().map(|x| x.to_string()).collect()
}

fn main() -> f2_ergodic::Result<()> {
    let mut d = DigitStream::with_constant_tail(&[], 0);
    for _ in 0..10 {
        print!("{} ", show(&d));
        d.odometer_step(Direction::Forward, DEFAULT_LOOKAHEAD)?;
    }
    println!();

    let mut carry = DigitStream::with_constant_tail(&[2, 2, 2, 1], 0);
    println!("{} + 1 = ", show(&carry));
    carry.odometer_step(Direction::Forward, DEFAULT_LOOKAHEAD)?;
    println!("  {}", show(&carry));

    let mut all_twos = DigitStream::with_constant_tail(&[], 2);
    match all_twos.odometer_step(Direction::Forward, 32) {
        Ok(()) => println!("unexpected carry resolution"),
        Err(e) => println!("222… + 1: {e}"),
    }

    // Add-two visits all 3^k residues before returning.
    let k = 4;
    let mut x = DigitStream::with_constant_tail(&[], 0);
    let start = x.prefix(k);
    let mut period = 0;
    loop {
        x.odometer_step(Direction::Forward, DEFAULT_LOOKAHEAD)?;
        x.odometer_step(Direction::Forward, DEFAULT_LOOKAHEAD)?;
        period += 1;
        if x.prefix(k) == start {
            break;
        }
    }
    println!("add-two period on the first {k} digits: {period} = 3^{k}");
    Ok(())
}
