//! Hand-entered n = 2, k = 4 worked tables, row by row.

#![allow(dead_code)]

/// Family M2, rows UX(1..=4), UV, VX(1..=4).
pub const M2_N2_K4: [[u64; 9]; 9] = [
    [78, 79, 80, 81, 73, 74, 75, 76, 77],
    [62, 60, 58, 56, 63, 61, 59, 57, 55],
    [42, 43, 44, 45, 37, 38, 39, 40, 41],
    [22, 21, 20, 19, 27, 26, 25, 24, 23],
    [1, 2, 3, 4, 5, 6, 7, 8, 9],
    [14, 15, 16, 17, 18, 10, 11, 12, 13],
    [36, 34, 32, 30, 28, 35, 33, 31, 29],
    [50, 51, 52, 53, 54, 46, 47, 48, 49],
    [68, 67, 66, 65, 64, 72, 71, 70, 69],
];

/// Family M3, rows UX(1..=5), UV, VX(1..=5).
pub const M3_N2_K4: [[u64; 9]; 11] = [
    [99, 98, 97, 96, 95, 94, 93, 92, 91],
    [82, 83, 84, 85, 86, 87, 88, 89, 90],
    [81, 80, 79, 78, 77, 76, 75, 74, 73],
    [64, 65, 66, 67, 68, 69, 70, 71, 72],
    [63, 62, 61, 60, 59, 58, 57, 56, 55],
    [1, 2, 3, 4, 5, 6, 7, 8, 9],
    [18, 17, 16, 15, 14, 13, 12, 11, 10],
    [19, 20, 21, 22, 23, 24, 25, 26, 27],
    [36, 35, 34, 33, 32, 31, 30, 29, 28],
    [37, 38, 39, 40, 41, 42, 43, 44, 45],
    [54, 53, 52, 51, 50, 49, 48, 47, 46],
];
