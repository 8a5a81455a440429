#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/rng.hpp"

namespace qcorr::hmm {
struct Hmm;
}
namespace qcorr::bbqc {
struct BbqcModel;
}

namespace qcorr::data {

enum class Format { GenericCsv, Biofam, Spect, Promoter };

Format parse_format(const std::string& name);

/// Fixed-length integer sequences over the alphabet {0..M-1}.
struct Dataset {
    std::string name;
    int M = 0;
    int n = 0;
    std::vector<std::vector<int>> sequences;
    std::string provenance;

    std::size_t size() const { return sequences.size(); }
    void validate() const;
};

/// Load one of the supported on-disk formats. Malformed rows are rejected
/// with the offending line number in the message.
Dataset load_sequences(const std::string& path, Format format);

/// Write the generic CSV form ("# M=<int> n=<int>" header, one sequence
/// per line). load_sequences(GenericCsv) inverts this exactly.
void save_generic_csv(const Dataset& dataset, const std::string& path);

/// Seeded shuffle-then-split; the test side receives round(fraction * N)
/// sequences (at least 1, at most N-1).
std::pair<Dataset, Dataset> split(const Dataset& dataset, double holdout_fraction,
                                  std::uint64_t seed);

/// Mini-batch index ranges with a per-epoch reshuffle keyed on (seed, epoch).
/// The last batch may be short.
std::vector<std::vector<std::size_t>> minibatch_indices(std::size_t count, std::size_t batch_size,
                                                        std::uint64_t seed, std::uint64_t epoch);

std::vector<Dataset> minibatches(const Dataset& dataset, std::size_t batch_size,
                                 std::uint64_t seed, std::uint64_t epoch);

/// Ancestral samples from a trained or hand-built generator; provenance
/// records the generator checkpoint hash.
Dataset synth_from_model(const hmm::Hmm& generator, std::size_t count, int n, std::uint64_t seed);
Dataset synth_from_model(const bbqc::BbqcModel& generator, std::size_t count, int n,
                         std::uint64_t seed);

/// FNV-1a over a string; used for checkpoint provenance stamps.
std::uint64_t fnv1a(const std::string& text);

}  // namespace qcorr::data
