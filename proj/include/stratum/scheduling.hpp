// Scheduling strategies built from rules, traversals and normal forms, and the
// named schedules for the GEMM and binomial filter programs.
//
// A loop nest is read from the outermost level inward. Levels are applied maps
// whose function is a lambda, descending into the lambda body, and applied
// reductions, descending into the body of the two-lambda operator. Layout
// applications (join, transpose, split, ...) and `add(e)(...)` between levels
// are skipped.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stratum/normal_forms.hpp"

namespace stratum {

enum class LevelKind { Map, Reduce };

/// Levels of the nest rooted at e.
std::vector<LevelKind> nestLevels(const ir::Expr& e);

/// s applied at nest level k (1-based) below the current term.
Strat atLevel(int k, Strat s);

/// idAfter `;` createTransposePair `;` argument(transposeBeforeMapMapF)
Strat loopInterchange();
/// applyNTimes(d, fmap, loopInterchange)
Strat loopInterchangeAtDepth(int d);
/// Swaps nest levels k and k+1 where both are maps: layout wrappers between
/// them are fissioned out first, and dependent inner data is fissioned when needed.
Strat swapMaps(int k);
/// Moves the reduction at level k+1 outside the map at level k.
Strat swapMapReduce(int k);

/// After blocking d dimensions the tile loops are interleaved with the element
/// loops; interchange(d) moves the first element loop below the d-1 tile loops
/// that follow it.
Strat interchange(int d);
/// One split per listed size, tile loops outermost in list order.
Strat tileND(std::vector<int> sizes);
Strat tile(int x, int y);
/// Permutes the levels of the nest at the current term. perm lists, for every
/// new position, the 1-based index of the level to place there.
Strat reorder(std::vector<int> perm);

/// topDown(packBRule), named packB.
Strat packB();
/// Parallel copy loop for packed buffers.
Strat parallelizeCopy();

struct Schedule {
  std::string name;
  std::string program;  // corpus program the schedule is written for
  std::function<Strat()> make;
};

/// baseline, blocking, vectorized, loopPerm, arrayPacking, cacheBlocks, parallelFull.
const std::vector<Schedule>& gemmSchedules();
/// bfNaive, bfSeparated, bfSeparatedPar.
const std::vector<Schedule>& binomialSchedules();
/// Both catalogs, GEMM first.
std::vector<Schedule> allSchedules();
const Schedule* findSchedule(const std::string& name);

}  // namespace stratum
