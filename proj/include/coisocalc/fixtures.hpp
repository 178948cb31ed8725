#pragma once

#include "coisocalc/linf.hpp"
#include "coisocalc/totcech.hpp"

#include <string>
#include <tuple>
#include <vector>

namespace coisocalc::fixtures {

/// Bracket entry [e_i, e_j] = value; the graded-antisymmetric partner is filled in.
using BracketEntry = std::tuple<int, int, Vec>;

/// Builds and validates a DGLA from sparse data. d_entries are (row, col, value).
FinDGLA make_dgla(std::vector<int> degrees, const std::vector<std::tuple<int, int, Rat>>& d_entries,
                  const std::vector<BracketEntry>& brackets);

/// G = <x | y, z> with dx = y, [x,y] = y, [x,z] = z.
FinDGLA toy_g();

/// Two opens: L_0 = G (+) G, L_1 = G, d_0(g0, g1) = g1, d_1(g0, g1) = g0.
ScsDGLA two_open();

/// Three opens with restriction to a one-dimensional abelian algebra on overlaps.
ScsDGLA three_open();

/// Sub-diagram of two_open on the ideal <y, z> and the quotient diagram on <x>,
/// with the levelwise inclusion and projection matrices.
struct ShortExact {
  ScsDGLA A, B, C;
  std::vector<Matrix> inc, proj;
};
ShortExact two_open_ideal_sequence();

/// First hit of a deterministic search inside graded gl(3): grading g in {-1,0,1}^3 (lex),
/// D = [X, .] for an off-diagonal unit X of degree 1, A two commuting off-diagonal units,
/// L = X plus three candidates among E_ij, E_ii, E_ii + E_jj, E_ii - E_jj, such that
/// L (+) A is a subalgebra satisfying every split invariant, D(A) is not inside A and
/// the binary derived bracket is nonzero.
SplitGLA split_gla();

/// Fixture file names paired with their documents, in a fixed order.
std::vector<std::pair<std::string, nlohmann::json>> all_documents();

}  // namespace coisocalc::fixtures
