#pragma once

#include <optional>
#include <string>
#include <vector>

#include "troptrack/poly.hpp"
#include "troptrack/tracks.hpp"
#include "troptrack/tropical.hpp"

namespace troptrack {

// Successive images of an X-point under the loop, x itself first. The word
// must be a loop on the triangulation.
std::vector<Vec> iterate_loop(const Triangulation& tri, const FlipWord& word,
                              const Vec& x, int n);

enum class StabilityVerdict { Stable, UnstableEvidence, Inconclusive };

std::string verdict_name(StabilityVerdict v);

// Outcome of sampling sign sequences along loop iterates. Stable means every
// sample's sign sequence became the same strict sign within the horizon and
// the sign cone was certified invariant under the frozen-sign linear map;
// UnstableEvidence records a concrete witness against stabilization;
// everything else is Inconclusive (zero signs, empty word, thin cone).
struct SignStabilityReport {
  StabilityVerdict verdict = StabilityVerdict::Inconclusive;
  std::vector<int> stable_sign;    // one entry in {-1,+1} per flip step
  int n0 = -1;                     // witnessed stabilization power, max over samples
  std::vector<int> n0_per_sample;  // unit vectors (+e_i, -e_i, ...) first, then
                                   // user points, then the random draws
  std::vector<LinCon> cone;        // C^eps in x-coordinates
  int samples = 0;
  std::string note;
};

SignStabilityReport detect_sign_stability(const Triangulation& tri,
                                          const FlipWord& word,
                                          int k_samples = 5,
                                          const std::vector<Vec>& extra = {});

// Product of the frozen-sign mutation matrices and permutation matrices of
// the word, later steps leftmost; signs has one entry per flip step.
Mat presentation_matrix(const Triangulation& tri, const FlipWord& word,
                        const std::vector<int>& signs);

struct EntropyResult {
  double value = 0.0;          // log of the spectral radius, per loop
  int power = 1;               // declared power, or the repeat count found
  SpectralRadius rho;          // of the presentation matrix analyzed
  Poly cp;                     // its characteristic polynomial
  std::vector<int> signs;      // stable sign used
};

// declared_power >= 1 states that the word already is the r-th power of the
// loop: it is analyzed as given and the entropy divided by r. With 0 the
// word is repeated r = 1..max_power times until one power certifies sign
// stability. Fails with NotStable when nothing certifies.
EntropyResult entropy(const Triangulation& tri, const FlipWord& word,
                      int declared_power = 0, int max_power = 6);

struct BoundedStabilityResult {
  std::vector<LinCon> cone;  // intersection reached so far
  int steps = 0;
  bool stationary = false;
  bool unknown = false;      // n_max exhausted (or 0) before stationarity
};

// Intersects the stable-sign cone with its preimages under the presentation
// matrix until the descending chain becomes stationary.
BoundedStabilityResult check_bounded_stability(const Triangulation& tri,
                                               const FlipWord& word, int n_max);

struct InvariantTrack {
  TrainTrack track;
  Mat matrix;        // carrying map V(track) -> V(track), cone branch order
  Mat restriction;   // the same map on span V(track)
  SpectralRadius rho;
  Poly cp;           // characteristic polynomial of the restriction
  bool rho_matches_presentation = false;
  bool probe_ran = false;     // ensemble images of cone generators tested
  bool probe_passed = false;  // against the stable-sign cone
};

// Searches the complete tracks of the chart for one carried to itself by the
// loop, identified through the final relabeling; first hit in enumeration
// order wins.
std::optional<InvariantTrack> find_invariant_track(const Triangulation& tri,
                                                   const FlipWord& word);

}  // namespace troptrack
