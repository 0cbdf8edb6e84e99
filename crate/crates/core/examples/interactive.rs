//! Plays the query channel with a scripted answer stream, as a human at the
//! terminal would. `splitfinder interactive` does the same over stdin.

use std::io::Cursor;

use splitfinder::engine::interactive_session;
use splitfinder::families::gen_disjunction;

fn main() {
    let inst = gen_disjunction(4, 1).unwrap();
    // "x2 or x4": answer each bit-string query accordingly
    let answers = Cursor::new("what?\n1\n0\n1\n1\n0\n");
    let mut out = Vec::new();
    match interactive_session(&inst, answers, &mut out) {
        Ok(t) => println!("{}after {} queries: {}", String::from_utf8_lossy(&out), t.query_count, t.identified),
        Err(e) => println!("{}session ended: {e}", String::from_utf8_lossy(&out)),
    }
}
