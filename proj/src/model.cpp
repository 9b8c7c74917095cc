#include "retroalign/model.hpp"

namespace retroalign {

std::string ModelId::tag() const {
    std::string s = channel == Channel::IC ? "ic" : "x";
    switch (feedback) {
    case Feedback::FullDuplexDelayedCSIT: return s + "fd";
    case Feedback::OutputFeedback: return s + "of";
    case Feedback::ShannonFeedback: return s + "sf";
    }
    return s;
}

std::optional<ModelId> parse_model(const std::string& tag) {
    for (const ModelId& m : {kICFD, kICOF, kICSF, kXFD, kXOF, kXSF})
        if (m.tag() == tag) return m;
    return std::nullopt;
}

void check_model_params(const ModelId& model, int M, int K) {
    if (K < 2 || M < 2) throw ParameterError("node counts must be at least 2");
    if (model.channel == Channel::IC && M != K)
        throw ParameterError("interference channel has M = K");
    if (model.channel == Channel::X && model.feedback != Feedback::FullDuplexDelayedCSIT && M != K)
        throw ParameterError("X channel with output or Shannon feedback requires M = K");
}

} // namespace retroalign
