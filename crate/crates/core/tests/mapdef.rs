mod common;

use common::{all_corpus, corpus, random_spec};
use kkmfix::mapdef::{parse, serialize};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn example_two_has_six_pieces() {
    let spec = corpus(2);
    assert_eq!(spec.pieces.len(), 6);
    assert!(spec.overrides.is_empty());
}

#[test]
fn escaping_piece_is_a_parse_error() {
    let err = parse("domain [0, 1]\npiece [0, 1] all: 2 x + 1\n").unwrap_err();
    assert_eq!(err.line, 2);
    assert!(err.message.contains("self-map violated at x = 1"), "{}", err.message);
}

#[test]
fn serialized_overrides() {
    let text = serialize(&corpus(3));
    assert!(text.contains("override 0 -> 10"));
    assert!(text.contains("override 5 -> 8"));
    assert!(!serialize(&corpus(2)).contains("override"));
}

#[test]
fn corpus_round_trips() {
    for (n, spec) in all_corpus() {
        assert_eq!(parse(&serialize(&spec)).unwrap(), spec, "entry {n}");
    }
}

#[test]
fn generated_specs_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let spec = random_spec(&mut rng);
        assert_eq!(parse(&serialize(&spec)).unwrap(), spec);
    }
}

#[test]
fn error_positions_index_the_input() {
    let cases = [
        "domain [0, 1]\npiece [0, 1] some: x\n",
        "domain [0, 1]\npiece [0, 1 all: x\n",
        "domain [0, 1]\npiece [0, 1] all: sqrt2 x\n",
        "domain [0, 1]\npiece [0, 1] all: x\noverride 1 => 0\n",
        "domain [0, 1]\nfrobnicate\n",
        "piece [0, 1] all: x\n",
        "domain [0, 2]\npiece [0, 1] all: x\n",
        "domain [0, 1]\npiece [0, 1] all: x\npiece [1/2, 1] all: x\n",
    ];
    for text in cases {
        let err = parse(text).unwrap_err();
        let line = text.split('\n').nth(err.line - 1).unwrap_or_else(|| panic!("line {} in {text:?}", err.line));
        assert!(err.column >= 1 && err.column <= line.chars().count() + 1, "{err} in {text:?}");
    }
}
