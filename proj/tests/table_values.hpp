#pragma once

// Printed mode table for N = 2, 4, ..., 20 (3 decimals).

namespace table {

struct Row {
    int n;
    double separation;
    int p;
    double frequency;
    double coefficient;
};

inline constexpr Row rows[] = {
    {2, 1.260, 2, 1.732, 1.414},
    {4, 0.909, 2, 1.732, 0.426},
    {4, 0.909, 4, 3.051, 1.348},
    {6, 0.740, 2, 1.732, 0.224},
    {6, 0.740, 4, 3.058, 0.556},
    {6, 0.740, 6, 4.274, 1.281},
    {8, 0.636, 2, 1.732, 0.143},
    {8, 0.636, 4, 3.063, 0.329},
    {8, 0.636, 6, 4.286, 0.608},
    {8, 0.636, 8, 5.443, 1.225},
    {10, 0.564, 2, 1.732, 0.101},
    {10, 0.564, 4, 3.067, 0.225},
    {10, 0.564, 6, 4.296, 0.388},
    {10, 0.564, 8, 5.458, 0.631},
    {10, 0.564, 10, 6.576, 1.179},
    {12, 0.511, 2, 1.732, 0.076},
    {12, 0.511, 4, 3.070, 0.166},
    {12, 0.511, 6, 4.303, 0.277},
    {12, 0.511, 8, 5.471, 0.423},
    {12, 0.511, 10, 6.593, 0.640},
    {12, 0.511, 12, 7.682, 1.141},
    {14, 0.469, 2, 1.732, 0.060},
    {14, 0.469, 4, 3.073, 0.129},
    {14, 0.469, 6, 4.310, 0.211},
    {14, 0.469, 8, 5.482, 0.312},
    {14, 0.469, 10, 6.608, 0.445},
    {14, 0.469, 12, 7.701, 0.643},
    {14, 0.469, 14, 8.767, 1.107},
    {16, 0.436, 2, 1.732, 0.049},
    {16, 0.436, 4, 3.075, 0.104},
    {16, 0.436, 6, 4.316, 0.167},
    {16, 0.436, 8, 5.492, 0.243},
    {16, 0.436, 10, 6.622, 0.337},
    {16, 0.436, 12, 7.718, 0.459},
    {16, 0.436, 14, 8.787, 0.642},
    {16, 0.436, 16, 9.834, 1.078},
    {18, 0.408, 2, 1.732, 0.041},
    {18, 0.408, 4, 3.077, 0.086},
    {18, 0.408, 6, 4.321, 0.137},
    {18, 0.408, 8, 5.500, 0.196},
    {18, 0.408, 10, 6.634, 0.267},
    {18, 0.408, 12, 7.733, 0.354},
    {18, 0.408, 14, 8.805, 0.468},
    {18, 0.408, 16, 9.856, 0.639},
    {18, 0.408, 18, 10.887, 1.053},
    {20, 0.384, 2, 1.732, 0.035},
    {20, 0.384, 4, 3.079, 0.073},
    {20, 0.384, 6, 4.326, 0.115},
    {20, 0.384, 8, 5.508, 0.163},
    {20, 0.384, 10, 6.644, 0.219},
    {20, 0.384, 12, 7.747, 0.285},
    {20, 0.384, 14, 8.822, 0.367},
    {20, 0.384, 16, 9.875, 0.474},
    {20, 0.384, 18, 10.910, 0.635},
    {20, 0.384, 20, 11.928, 1.030},
};

}  // namespace table
