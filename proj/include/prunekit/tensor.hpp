// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prunekit {

/// Largest epoch count per run; a run's epochs must fit in one 64-bit word.
inline constexpr std::uint32_t kMaxEpochs = 64;

/// Dense N x S x E grid of correctness bits, one row per example.
///
/// Storage is packed per example into 64-bit words. Each word holds
/// `runs_per_word()` consecutive runs, run j at bit offset (j % runs_per_word) * E,
/// epoch k at bit k inside the run. Words are stored as planes: plane w holds word w
/// of every example contiguously, so kernels stream across the example axis.
///
/// Row order is the lexicographic order of example ids; ids are unique.
class CorrectnessTensor {
public:
    CorrectnessTensor() = default;

    /// All cells start incorrect. `ids` must be strictly increasing.
    CorrectnessTensor(std::vector<std::string> ids, std::uint32_t runs, std::uint32_t epochs);

    std::size_t n() const noexcept { return ids_.size(); }
    std::uint32_t s() const noexcept { return runs_; }
    std::uint32_t e() const noexcept { return epochs_; }

    bool get(std::size_t example, std::uint32_t run, std::uint32_t epoch) const;
    void set(std::size_t example, std::uint32_t run, std::uint32_t epoch, bool correct);

    std::span<const std::string> ids() const noexcept { return ids_; }
    const std::string& id(std::size_t example) const { return ids_[example]; }
    std::optional<std::size_t> index_of(std::string_view id) const;

    std::uint32_t runs_per_word() const noexcept { return runs_per_word_; }
    std::uint32_t word_count() const noexcept { return word_count_; }
    /// Number of runs packed into word `w` (the last word may be partial).
    std::uint32_t runs_in_word(std::uint32_t w) const noexcept;
    std::span<const std::uint64_t> plane(std::uint32_t w) const noexcept;

    /// The E-bit pattern of one run (bit k = epoch k).
    std::uint64_t run_bits(std::size_t example, std::uint32_t run) const;

    /// First `runs` runs and first `epochs` epochs. Throws OutOfRange.
    CorrectnessTensor truncated(std::uint32_t runs, std::uint32_t epochs) const;

    bool operator==(const CorrectnessTensor& other) const;

private:
    std::vector<std::string> ids_;
    std::uint32_t runs_ = 0;
    std::uint32_t epochs_ = 0;
    std::uint32_t runs_per_word_ = 0;
    std::uint32_t word_count_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Gold-label probabilities with the same shape as a CorrectnessTensor.
///
/// Stored as planes by checkpoint: plane c = run * E + epoch holds one value per example.
class GoldProbTensor {
public:
    GoldProbTensor() = default;
    GoldProbTensor(std::size_t n, std::uint32_t runs, std::uint32_t epochs);

    std::size_t n() const noexcept { return n_; }
    std::uint32_t s() const noexcept { return runs_; }
    std::uint32_t e() const noexcept { return epochs_; }
    std::size_t checkpoints() const noexcept { return std::size_t{runs_} * epochs_; }

    double get(std::size_t example, std::uint32_t run, std::uint32_t epoch) const;
    /// Throws FieldOutOfRange unless 0 <= p <= 1.
    void set(std::size_t example, std::uint32_t run, std::uint32_t epoch, double p);

    /// checkpoints() planes of n() values each.
    std::span<const double> planes() const noexcept { return values_; }

    GoldProbTensor truncated(std::uint32_t runs, std::uint32_t epochs) const;

    bool operator==(const GoldProbTensor& other) const = default;

private:
    std::size_t n_ = 0;
    std::uint32_t runs_ = 0;
    std::uint32_t epochs_ = 0;
    std::vector<double> values_;
};

}  // namespace prunekit
