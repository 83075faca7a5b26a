#pragma once

#include <stdexcept>
#include <string>

namespace maivar {

// Root of every error the library throws. Each failure mode named by a
// module contract has its own subclass so callers can catch precisely.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
class InvalidParameter : public Error { public: using Error::Error; };

// I/O failures (open/read/write) not attributable to file content.
class IoError : public Error { public: using Error::Error; };

// audio-dsp
class EmptySignal : public Error { public: using Error::Error; };
class DegenerateFilterbank : public Error { public: using Error::Error; };
class InsufficientFrames : public Error { public: using Error::Error; };
class MalformedWav : public Error { public: using Error::Error; };

// audio-image
class EmptyTrack : public Error { public: using Error::Error; };
class MalformedImage : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };

// embeddings
class EmptyInput : public Error { public: using Error::Error; };
class BadMagic : public Error { public: using Error::Error; };
class VersionMismatch : public Error { public: using Error::Error; };
class ShapeMismatch : public Error { public: using Error::Error; };
class DuplicateClipId : public Error { public: using Error::Error; };
class MalformedEmbeddings : public Error { public: using Error::Error; };

// neural
class ShapeError : public Error { public: using Error::Error; };
class EmptyBatch : public Error { public: using Error::Error; };
class EmptyDataset : public Error { public: using Error::Error; };
class MalformedModel : public Error { public: using Error::Error; };

// fusion
class IncompatibleArchitecture : public Error { public: using Error::Error; };

class MissingModality : public Error {
public:
    explicit MissingModality(std::string clip_id)
        : Error("missing modality for clip '" + clip_id + "'"), clip_id_(std::move(clip_id)) {}
    const std::string& clip_id() const noexcept { return clip_id_; }

private:
    std::string clip_id_;
};

// pipeline
class ValidationError : public Error { public: using Error::Error; };

class MissingInput : public Error {
public:
    MissingInput(std::string clip_id, const std::string& what)
        : Error("missing input for clip '" + clip_id + "': " + what), clip_id_(std::move(clip_id)) {}
    const std::string& clip_id() const noexcept { return clip_id_; }

private:
    std::string clip_id_;
};

}  // namespace maivar
