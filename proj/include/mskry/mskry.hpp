/// @file mskry.hpp
/// @brief Umbrella header for the multi-shift Krylov library.

#ifndef MSKRY_MSKRY_HPP
#define MSKRY_MSKRY_HPP

#include "mskry/bench.hpp"
#include "mskry/cdr3d.hpp"
#include "mskry/hessenberg.hpp"
#include "mskry/matrix_market.hpp"
#include "mskry/small_dense.hpp"
#include "mskry/solvers_nested.hpp"
#include "mskry/solvers_seed.hpp"
#include "mskry/solvers_shifted.hpp"
#include "mskry/sparse_matrix.hpp"

#endif  // MSKRY_MSKRY_HPP
