use tribracket::atlas::{variants, Atlas, Components};
use tribracket_core::{alexander_counting, counting_invariant, Tribracket};

#[test]
fn every_entry_is_consistent() {
    let t = Tribracket::alexander(3, 1, 2).unwrap();
    for e in Atlas::builtin().entries() {
        let d = e.diagram();
        assert_eq!(d.num_regions(), e.crossings() + 2, "{}", e.name);
        assert_eq!(e.is_knot(), !e.name.starts_with('L'), "{}", e.name);
        let enumerated = counting_invariant(&t, d);
        assert_eq!(u128::from(enumerated), alexander_counting(3, 1, 2, d).unwrap(), "{}", e.name);
    }
}

#[test]
fn variants_keep_the_alexander_count() {
    let atlas = Atlas::builtin();
    for name in atlas.list_entries(Some(6), Components::Any) {
        let d = atlas.resolve(name).unwrap();
        let want = alexander_counting(3, 1, 2, &d).unwrap();
        for (label, v) in variants(&d) {
            assert_eq!(v.num_components(), d.num_components());
            assert_eq!(alexander_counting(3, 1, 2, &v).unwrap(), want, "{name} {label}");
        }
    }
}
