// SPDX-FileCopyrightText: (c) 2026 The prunekit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "prunekit/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "prunekit/error.hpp"

namespace prunekit {
namespace {

std::uint64_t run_mask(std::uint32_t epochs) {
    return epochs >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << epochs) - 1;
}

}  // namespace

CorrectnessTensor::CorrectnessTensor(std::vector<std::string> ids, std::uint32_t runs, std::uint32_t epochs)
    : ids_(std::move(ids)), runs_(runs), epochs_(epochs) {
    if (epochs_ > kMaxEpochs) {
        throw Error(ErrorKind::GridTooLarge,
                    "epoch count " + std::to_string(epochs_) + " exceeds " + std::to_string(kMaxEpochs));
    }
    for (std::size_t i = 1; i < ids_.size(); ++i) {
        if (!(ids_[i - 1] < ids_[i])) throw Error(ErrorKind::Internal, "tensor ids must be strictly increasing");
    }
    runs_per_word_ = epochs_ == 0 ? 1 : 64 / epochs_;
    word_count_ = (runs_ + runs_per_word_ - 1) / runs_per_word_;
    words_.assign(std::size_t{word_count_} * ids_.size(), 0);
}

std::uint32_t CorrectnessTensor::runs_in_word(std::uint32_t w) const noexcept {
    const std::uint32_t first = w * runs_per_word_;
    return std::min(runs_per_word_, runs_ - first);
}

std::span<const std::uint64_t> CorrectnessTensor::plane(std::uint32_t w) const noexcept {
    return {words_.data() + std::size_t{w} * ids_.size(), ids_.size()};
}

bool CorrectnessTensor::get(std::size_t example, std::uint32_t run, std::uint32_t epoch) const {
    const std::uint32_t w = run / runs_per_word_;
    const std::uint32_t bit = (run % runs_per_word_) * epochs_ + epoch;
    return (words_[std::size_t{w} * ids_.size() + example] >> bit) & 1u;
}

void CorrectnessTensor::set(std::size_t example, std::uint32_t run, std::uint32_t epoch, bool correct) {
    const std::uint32_t w = run / runs_per_word_;
    const std::uint32_t bit = (run % runs_per_word_) * epochs_ + epoch;
    auto& word = words_[std::size_t{w} * ids_.size() + example];
    if (correct) {
        word |= std::uint64_t{1} << bit;
    } else {
        word &= ~(std::uint64_t{1} << bit);
    }
}

std::uint64_t CorrectnessTensor::run_bits(std::size_t example, std::uint32_t run) const {
    const std::uint32_t w = run / runs_per_word_;
    const std::uint32_t shift = (run % runs_per_word_) * epochs_;
    const std::uint64_t word = words_[std::size_t{w} * ids_.size() + example];
    return (shift >= 64 ? 0 : word >> shift) & run_mask(epochs_);
}

std::optional<std::size_t> CorrectnessTensor::index_of(std::string_view id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
}

CorrectnessTensor CorrectnessTensor::truncated(std::uint32_t runs, std::uint32_t epochs) const {
    if (runs < 1 || runs > runs_ || epochs < 1 || epochs > epochs_) {
        throw Error(ErrorKind::OutOfRange, "truncation (" + std::to_string(runs) + ", " + std::to_string(epochs) +
                                               ") outside grid (" + std::to_string(runs_) + ", " +
                                               std::to_string(epochs_) + ")");
    }
    CorrectnessTensor out(ids_, runs, epochs);
    for (std::size_t i = 0; i < n(); ++i) {
        for (std::uint32_t j = 0; j < runs; ++j) {
            const std::uint64_t bits = run_bits(i, j) & run_mask(epochs);
            const std::uint32_t w = j / out.runs_per_word_;
            const std::uint32_t shift = (j % out.runs_per_word_) * epochs;
            out.words_[std::size_t{w} * n() + i] |= bits << shift;
        }
    }
    return out;
}

bool CorrectnessTensor::operator==(const CorrectnessTensor& other) const {
    return runs_ == other.runs_ && epochs_ == other.epochs_ && ids_ == other.ids_ && words_ == other.words_;
}

GoldProbTensor::GoldProbTensor(std::size_t n, std::uint32_t runs, std::uint32_t epochs)
    : n_(n), runs_(runs), epochs_(epochs), values_(n * runs * epochs, 0.0) {}

double GoldProbTensor::get(std::size_t example, std::uint32_t run, std::uint32_t epoch) const {
    return values_[(std::size_t{run} * epochs_ + epoch) * n_ + example];
}

void GoldProbTensor::set(std::size_t example, std::uint32_t run, std::uint32_t epoch, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::FieldOutOfRange, "gold_prob " + std::to_string(p) + " outside [0, 1]");
    }
    values_[(std::size_t{run} * epochs_ + epoch) * n_ + example] = p + 0.0;  // folds -0.0 into +0.0
}

GoldProbTensor GoldProbTensor::truncated(std::uint32_t runs, std::uint32_t epochs) const {
    if (runs < 1 || runs > runs_ || epochs < 1 || epochs > epochs_) {
        throw Error(ErrorKind::OutOfRange, "gold-probability truncation outside grid");
    }
    GoldProbTensor out(n_, runs, epochs);
    for (std::uint32_t j = 0; j < runs; ++j) {
        for (std::uint32_t k = 0; k < epochs; ++k) {
            std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>((std::size_t{j} * epochs_ + k) * n_), n_,
                        out.values_.begin() + static_cast<std::ptrdiff_t>((std::size_t{j} * epochs + k) * n_));
        }
    }
    return out;
}

}  // namespace prunekit
