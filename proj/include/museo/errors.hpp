#ifndef MUSEO_ERRORS_HPP
#define MUSEO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace museo {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define MUSEO_DEFINE_ERROR(NAME)                                    \
    class NAME : public Error {                                     \
    public:                                                         \
        explicit NAME(const std::string& msg = #NAME) : Error(msg) {} \
    }

// imgproc
MUSEO_DEFINE_ERROR(UnsupportedConversion);
MUSEO_DEFINE_ERROR(MultiChannelInput);
MUSEO_DEFINE_ERROR(InvalidThresholds);
MUSEO_DEFINE_ERROR(OutOfBounds);

// metrics
MUSEO_DEFINE_ERROR(LengthMismatch);
MUSEO_DEFINE_ERROR(NotNormalized);
MUSEO_DEFINE_ERROR(EmptyRelevantSet);
MUSEO_DEFINE_ERROR(EmptyInput);
MUSEO_DEFINE_ERROR(DimensionMismatch);

// descriptors
MUSEO_DEFINE_ERROR(BadBinCount);
MUSEO_DEFINE_ERROR(GrayInput);
MUSEO_DEFINE_ERROR(ImageTooSmall);
MUSEO_DEFINE_ERROR(BadKeepCount);
MUSEO_DEFINE_ERROR(GeometryMismatch);
MUSEO_DEFINE_ERROR(OcrFailure);

// features
MUSEO_DEFINE_ERROR(PatchOutOfBounds);

// preprocess
MUSEO_DEFINE_ERROR(NoPaintingFound);
MUSEO_DEFINE_ERROR(NoLinesFound);
MUSEO_DEFINE_ERROR(BoxOutsideCrop);

// engine
MUSEO_DEFINE_ERROR(LayoutMismatch);
MUSEO_DEFINE_ERROR(NoActiveDescriptor);
MUSEO_DEFINE_ERROR(FewerImagesThanClusters);
MUSEO_DEFINE_ERROR(UnreadableImage);
MUSEO_DEFINE_ERROR(CatalogMismatch);
MUSEO_DEFINE_ERROR(CorruptIndex);
MUSEO_DEFINE_ERROR(VersionMismatch);
MUSEO_DEFINE_ERROR(FingerprintMismatch);

// config
MUSEO_DEFINE_ERROR(ConfigError);

#undef MUSEO_DEFINE_ERROR

}  // namespace museo

#endif
