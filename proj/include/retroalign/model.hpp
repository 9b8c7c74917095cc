#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace retroalign {

enum class Channel { IC, X };
enum class Feedback { FullDuplexDelayedCSIT, OutputFeedback, ShannonFeedback };

struct ModelId {
    Channel channel = Channel::IC;
    Feedback feedback = Feedback::FullDuplexDelayedCSIT;

    bool delayed_csit() const { return feedback != Feedback::OutputFeedback; }
    bool output_feedback() const { return feedback != Feedback::FullDuplexDelayedCSIT; }
    bool full_duplex() const { return feedback == Feedback::FullDuplexDelayedCSIT; }

    // Short tag: icfd, icof, icsf, xfd, xof, xsf.
    std::string tag() const;

    friend bool operator==(const ModelId&, const ModelId&) = default;
};

inline constexpr ModelId kICFD{Channel::IC, Feedback::FullDuplexDelayedCSIT};
inline constexpr ModelId kICOF{Channel::IC, Feedback::OutputFeedback};
inline constexpr ModelId kICSF{Channel::IC, Feedback::ShannonFeedback};
inline constexpr ModelId kXFD{Channel::X, Feedback::FullDuplexDelayedCSIT};
inline constexpr ModelId kXOF{Channel::X, Feedback::OutputFeedback};
inline constexpr ModelId kXSF{Channel::X, Feedback::ShannonFeedback};

std::optional<ModelId> parse_model(const std::string& tag);

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Validates node counts for a model. X with output or Shannon feedback needs M = K.
void check_model_params(const ModelId& model, int M, int K);

} // namespace retroalign
