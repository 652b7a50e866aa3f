#include "museo/features.hpp"

namespace museo::features {

// 256 sampling pairs drawn once from an isotropic Gaussian (sigma = 31/5)
// over the 31x31 patch, rejection-clamped to [-13, 13] and frozen so that
// descriptors stay compatible across builds and machines.
const std::int8_t kBriefPattern[256][4] = {
    {-2, -4, 2, -1}, {-5, -3, 9, 6}, {-1, 4, -5, 5}, {8, 8, -9, 2},
    {3, -4, -1, 5}, {1, -3, -12, 2}, {12, -3, -3, -9}, {7, 13, 5, -5},
    {1, -13, 3, 7}, {-1, 6, 7, 13}, {-6, -8, 4, 3}, {4, -8, 2, -4},
    {0, 2, 5, 3}, {-9, 0, 9, -2}, {-6, -9, 7, 3}, {6, -1, -3, -3},
    {-1, -3, 10, -8}, {-1, 3, 0, 12}, {-7, -4, 6, 3}, {-8, -2, 13, 8},
    {0, 0, -6, -3}, {-9, 1, -7, 0}, {11, -6, -1, -1}, {-6, 2, 8, 11},
    {7, 1, 9, -11}, {-11, -1, -1, -4}, {2, 5, 5, 3}, {1, 3, 1, 1},
    {1, 0, 1, 6}, {5, 8, 5, 4}, {8, -11, -11, -9}, {-1, -6, 0, -1},
    {0, 9, 4, 5}, {5, 6, -1, 4}, {6, -9, -8, 3}, {6, 2, 3, -1},
    {3, -5, -5, -2}, {-1, -6, 1, 7}, {8, 6, 6, 2}, {-10, -8, -8, -9},
    {3, -5, -8, -8}, {2, -12, 0, -1}, {3, -6, 2, 11}, {0, 10, -3, 2},
    {2, 3, 2, -2}, {11, 2, -2, 4}, {5, 8, -3, 3}, {-13, -2, -8, -3},
    {-9, -5, -12, 9}, {3, -2, -3, -6}, {-6, 1, 3, -3}, {3, 6, -2, -3},
    {4, -1, -6, 12}, {8, -11, 10, 2}, {-7, 3, 13, 0}, {7, 9, -11, -5},
    {-3, 3, 9, -4}, {11, -1, -2, -4}, {-4, -1, 2, 8}, {6, 13, -3, 0},
    {-12, -7, 5, -6}, {8, 10, -3, -8}, {5, -5, 0, 0}, {3, -4, -1, -3},
    {3, 3, 1, -5}, {-3, 0, 8, 6}, {-7, 3, -1, -3}, {-8, -2, 5, -3},
    {-3, 4, -4, 0}, {2, -3, 1, -5}, {8, 1, 2, -5}, {-1, -5, 1, 1},
    {1, 0, -1, -8}, {-7, -11, -6, -5}, {4, 5, 5, -9}, {1, 2, 10, 11},
    {-3, 7, 1, 1}, {-3, 5, 0, 1}, {-4, 6, 5, 13}, {-6, 3, 4, 6},
    {-8, 5, 8, -2}, {-8, 2, 9, -4}, {-5, -3, 0, 11}, {0, -5, -2, 7},
    {-7, -3, -10, 8}, {-3, -2, -3, 4}, {10, -8, -8, 0}, {5, 2, 7, 3},
    {-6, -11, 6, 7}, {2, -3, -10, -5}, {7, 8, 5, 2}, {-10, -2, 0, -5},
    {5, -3, -3, -2}, {-7, 2, 10, -1}, {10, 8, 9, -3}, {5, -5, -12, 1},
    {6, -3, -6, 8}, {-2, 7, 8, 1}, {-3, -6, -2, 0}, {-2, -10, -4, -1},
    {4, -1, 0, 6}, {-1, -3, 10, -6}, {3, 0, -13, -4}, {-2, 1, 8, 3},
    {-2, -6, 7, 1}, {-2, -8, -4, 8}, {-11, -3, 0, -2}, {11, -3, -8, 13},
    {11, -11, 1, 3}, {4, -6, -5, 4}, {5, 3, 5, -4}, {-3, 6, 5, 0},
    {-6, -5, -4, 4}, {-1, -5, 1, -3}, {2, -10, -4, -2}, {1, -1, 9, 11},
    {1, 0, -4, 5}, {-8, 10, 3, -1}, {3, -7, -2, -1}, {0, -12, 3, -10},
    {7, -1, 6, -4}, {10, -5, -6, 7}, {9, -7, 12, -6}, {6, 0, 4, -2},
    {6, 2, 5, 3}, {-8, -2, -8, 0}, {-3, -1, 7, 2}, {-6, 9, 11, -2},
    {-2, -6, 7, -3}, {3, -5, -7, -8}, {-1, -13, -8, -7}, {-2, 3, 1, 1},
    {-6, 7, -2, 3}, {-2, 1, 0, -3}, {9, 2, 4, -3}, {-6, 0, -3, -3},
    {2, -5, 2, -1}, {-9, -12, -4, 9}, {-11, -3, 2, -8}, {-3, 1, -3, -5},
    {0, -2, 2, -2}, {-3, 4, 0, -7}, {-4, 1, -3, 7}, {9, -2, -4, 2},
    {1, 0, -2, 7}, {-5, -5, -4, -11}, {3, 5, 11, -5}, {-4, -3, 11, 3},
    {-9, 1, -1, 8}, {4, 7, 9, 8}, {8, 0, 2, 4}, {-1, 5, 7, 6},
    {2, 9, -5, 10}, {-3, 1, 1, -9}, {10, 7, 0, 7}, {-7, 1, -7, -8},
    {5, 11, 3, 3}, {9, 5, -10, -13}, {4, 2, -2, -7}, {-9, -3, -3, -3},
    {9, 10, 2, -5}, {-2, -1, 0, 3}, {-3, -11, -3, 5}, {9, 3, 4, 6},
    {-13, -9, -1, -13}, {8, 0, 2, 3}, {-9, 10, -7, -6}, {-7, 0, 5, 4},
    {3, 2, 1, 3}, {3, 12, 11, 11}, {11, -1, 12, 1}, {1, -9, 5, 1},
    {1, 10, -7, -5}, {0, -13, -9, 6}, {8, -6, -4, -6}, {0, -5, 4, -1},
    {8, -6, 1, -1}, {8, -1, 4, -8}, {0, 12, -1, -2}, {4, 4, -2, -1},
    {4, -1, -9, 1}, {11, 0, -3, -6}, {9, 2, -5, 2}, {10, 6, 1, -3},
    {-2, 3, -3, 4}, {6, -10, 6, -3}, {-2, -8, -1, 1}, {3, -2, -2, -3},
    {-7, -8, 12, -6}, {0, 1, 6, -3}, {-4, 3, -5, 8}, {9, 3, -1, -4},
    {-2, -11, -2, -6}, {10, 5, -2, 2}, {1, -11, 0, 0}, {11, -3, 4, -2},
    {6, 12, -5, -3}, {3, 2, -1, -1}, {1, 1, -1, 6}, {3, 2, -7, -7},
    {-7, 10, -12, 6}, {6, 1, -11, -8}, {5, 1, -6, 1}, {-6, -5, -5, 8},
    {4, -10, 9, -8}, {-10, 1, -4, 6}, {-2, 3, -6, 4}, {-4, 2, -2, -9},
    {-2, -5, -5, 0}, {-9, 3, 6, 6}, {-4, 5, -9, 1}, {0, -3, 1, -3},
    {-10, 9, -11, 3}, {-1, -5, 6, 9}, {0, 2, -6, -2}, {3, -3, -5, 5},
    {-3, 0, 4, -4}, {5, 1, 7, 9}, {-8, 1, 5, 1}, {4, -7, 0, -8},
    {-5, 3, 6, 7}, {1, -6, 4, -2}, {9, 8, -1, 3}, {6, 7, 7, 4},
    {2, 6, 8, 5}, {3, 4, -11, 4}, {-10, 10, 1, 4}, {-11, 12, 5, 3},
    {0, 9, 7, 4}, {-11, 3, -3, 5}, {1, 0, -9, 2}, {-6, -8, 1, 3},
    {-8, -13, 1, 2}, {6, -1, 6, -3}, {1, -3, -7, 10}, {4, 5, 9, 9},
    {3, 0, 2, 1}, {4, 6, -8, 4}, {3, 2, 8, -4}, {-4, -6, -4, -2},
    {-8, -4, -3, -9}, {2, -5, -3, 6}, {-7, 2, 5, 4}, {-1, 4, 6, -8},
    {11, 1, 12, -10}, {-7, -6, 6, -3}, {-5, -9, -5, -8}, {4, 1, 7, -1},
    {5, 4, 2, 4}, {7, 5, -6, -6}, {-1, -5, 4, -6}, {0, 4, -5, 4},
    {-2, -5, -8, 0}, {0, 6, 10, 5}, {2, -5, 5, -2}, {6, 0, -7, 1},
};

}  // namespace museo::features
