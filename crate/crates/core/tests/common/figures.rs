//! Entries of the order-6 hexagon friezes on the radius-7 sphere, keyed by
//! doubled index `(I, J)`. Reference values for regression.

use spherical_frieze::frieze::Line;

// 89 nodes, 14 lines
pub const HERONIAN_NODES: &[(i64, i64, &str)] = &[
    (-6, 4, "74"),
    (-6, 5, "0"),
    (-6, 6, "0"),
    (-5, 4, "-82"),
    (-5, 6, "0"),
    (-4, 2, "14"),
    (-4, 3, "42"),
    (-4, 4, "50"),
    (-4, 5, "-82"),
    (-4, 6, "98"),
    (-4, 7, "0"),
    (-4, 8, "0"),
    (-3, 2, "-6"),
    (-3, 4, "-528/7"),
    (-3, 6, "-62"),
    (-3, 8, "0"),
    (-2, 0, "26"),
    (-2, 1, "-60"),
    (-2, 2, "126"),
    (-2, 3, "72"),
    (-2, 4, "52"),
    (-2, 5, "72/7"),
    (-2, 6, "170"),
    (-2, 7, "-62"),
    (-2, 8, "74"),
    (-2, 9, "0"),
    (-2, 10, "0"),
    (-1, 0, "0"),
    (-1, 2, "-60"),
    (-1, 4, "-312/7"),
    (-1, 6, "-200/7"),
    (-1, 8, "-414/7"),
    (-1, 10, "0"),
    (0, 0, "0"),
    (0, 1, "0"),
    (0, 2, "140"),
    (0, 3, "12"),
    (0, 4, "26"),
    (0, 5, "376/7"),
    (0, 6, "116"),
    (0, 7, "-96"),
    (0, 8, "106"),
    (0, 9, "-414/7"),
    (0, 10, "26"),
    (0, 11, "0"),
    (0, 12, "0"),
    (1, 2, "0"),
    (1, 4, "12"),
    (1, 6, "80"),
    (1, 8, "-36"),
    (1, 10, "-60"),
    (1, 12, "0"),
    (2, 2, "0"),
    (2, 3, "0"),
    (2, 4, "70"),
    (2, 5, "-84"),
    (2, 6, "56"),
    (2, 7, "28"),
    (2, 8, "14"),
    (2, 9, "-6"),
    (2, 10, "126"),
    (2, 11, "-60"),
    (2, 12, "140"),
    (2, 13, "0"),
    (2, 14, "0"),
    (3, 4, "0"),
    (3, 6, "-84"),
    (3, 8, "42"),
    (3, 10, "72"),
    (3, 12, "12"),
    (4, 4, "0"),
    (4, 5, "0"),
    (4, 6, "74"),
    (4, 7, "-82"),
    (4, 8, "50"),
    (4, 9, "-528/7"),
    (4, 10, "52"),
    (4, 11, "-312/7"),
    (4, 12, "26"),
    (5, 6, "0"),
    (5, 8, "-82"),
    (5, 10, "72/7"),
    (6, 6, "0"),
    (6, 7, "0"),
    (6, 8, "98"),
    (6, 9, "-62"),
    (6, 10, "170"),
    (7, 8, "0"),
    (8, 8, "0"),
];
pub const HERONIAN_LINES: &[(Line, &str)] = &[
    (Line::Ne(-3), "98"),
    (Line::Ne(-2), "74"),
    (Line::Ne(-1), "26"),
    (Line::Ne(0), "140"),
    (Line::Ne(1), "70"),
    (Line::Ne(2), "74"),
    (Line::Ne(3), "98"),
    (Line::Se(0), "140"),
    (Line::Se(1), "70"),
    (Line::Se(2), "74"),
    (Line::Se(3), "98"),
    (Line::Se(4), "74"),
    (Line::Se(5), "26"),
    (Line::Se(6), "140"),
];
// 45 nodes, 16 lines
pub const CAYLEY_MENGER_NODES: &[(i64, i64, &str)] = &[
    (-6, 4, "74"),
    (-6, 6, "0"),
    (-4, 2, "14"),
    (-4, 4, "50"),
    (-4, 6, "98"),
    (-4, 8, "0"),
    (-2, 0, "26"),
    (-2, 2, "126"),
    (-2, 4, "52"),
    (-2, 6, "170"),
    (-2, 8, "74"),
    (-2, 10, "0"),
    (0, 0, "0"),
    (0, 2, "140"),
    (0, 4, "26"),
    (0, 6, "116"),
    (0, 8, "106"),
    (0, 10, "26"),
    (0, 12, "0"),
    (2, 2, "0"),
    (2, 4, "70"),
    (2, 6, "56"),
    (2, 8, "14"),
    (2, 10, "126"),
    (2, 12, "140"),
    (2, 14, "0"),
    (4, 4, "0"),
    (4, 6, "74"),
    (4, 8, "50"),
    (4, 10, "52"),
    (4, 12, "26"),
    (4, 14, "70"),
    (4, 16, "0"),
    (6, 6, "0"),
    (6, 8, "98"),
    (6, 10, "170"),
    (6, 12, "116"),
    (6, 14, "56"),
    (6, 16, "74"),
    (8, 8, "0"),
    (8, 10, "74"),
    (8, 12, "106"),
    (8, 14, "14"),
    (10, 10, "0"),
    (10, 12, "26"),
];
pub const CAYLEY_MENGER_LINES: &[(Line, &str)] = &[
    (Line::Ne(-3), "98"),
    (Line::Ne(-2), "74"),
    (Line::Ne(-1), "26"),
    (Line::Ne(0), "140"),
    (Line::Ne(1), "70"),
    (Line::Ne(2), "74"),
    (Line::Ne(3), "98"),
    (Line::Ne(4), "74"),
    (Line::Se(0), "140"),
    (Line::Se(1), "70"),
    (Line::Se(2), "74"),
    (Line::Se(3), "98"),
    (Line::Se(4), "74"),
    (Line::Se(5), "26"),
    (Line::Se(6), "140"),
    (Line::Se(7), "70"),
];
