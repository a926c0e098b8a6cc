use digitsum::figures::{figure_csv, FigureOptions};

#[test]
fn sawtooth_matches_fixture() {
    let got = figure_csv(4, &FigureOptions::default()).unwrap();
    assert_eq!(got, include_str!("../fixtures/figure4.csv"));
}

#[test]
fn gray_weights_match_fixture() {
    let got = figure_csv(13, &FigureOptions::default()).unwrap();
    assert_eq!(got, include_str!("../fixtures/figure13.csv"));
}
