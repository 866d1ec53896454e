//
// atlas — error types shared across the pipeline
//
// Copyright 2026 Atlas contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <stdexcept>
#include <string>

namespace atlas {

/// Base class for all atlas errors. Catch this at tool boundaries.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- file / schema loading ---

class ParseError : public Error {
public:
    using Error::Error;
};

/// A well-formed file that violates the expected schema. Carries the
/// offending field so callers can report "record 1245: missing 'threats'".
class SchemaError : public Error {
public:
    SchemaError(const std::string& field, const std::string& msg)
        : Error(msg), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class DuplicateCwe : public Error {
public:
    explicit DuplicateCwe(int cwe_id)
        : Error("duplicate cwe_id " + std::to_string(cwe_id)), cwe_id_(cwe_id) {}
    int cwe_id() const { return cwe_id_; }

private:
    int cwe_id_;
};

class UnknownAssetType : public Error {
public:
    using Error::Error;
};

// --- RTL / analysis ---

class SyntaxError : public Error {
public:
    SyntaxError(int line, int col, const std::string& msg)
        : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_ = 0;
    int col_ = 0;
};

class UnsupportedConstruct : public Error {
public:
    explicit UnsupportedConstruct(const std::string& construct)
        : Error("unsupported construct: " + construct), construct_(construct) {}
    const std::string& construct() const { return construct_; }

private:
    std::string construct_;
};

class DuplicateDecl : public Error {
public:
    DuplicateDecl(const std::string& name, const std::string& spans)
        : Error("duplicate declaration of '" + name + "' (" + spans + ")"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class UnknownSignal : public Error {
public:
    explicit UnknownSignal(const std::string& name)
        : Error("unknown signal: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// --- mapping / generation ---

class EmptyTmdb : public Error {
public:
    EmptyTmdb() : Error("threat model database has no records") {}
};

class NoDefinitions : public Error {
public:
    NoDefinitions() : Error("no asset definitions supplied") {}
};

class BackendError : public Error {
public:
    using Error::Error;
};

class InvalidDraft : public Error {
public:
    using Error::Error;
};

class NoTemplate : public Error {
public:
    explicit NoTemplate(int cwe_id)
        : Error("no property template family for CWE-" + std::to_string(cwe_id)),
          cwe_id_(cwe_id) {}
    int cwe_id() const { return cwe_id_; }

private:
    int cwe_id_;
};

class IterationExceeded : public Error {
public:
    using Error::Error;
};

class MissingContext : public Error {
public:
    explicit MissingContext(const std::string& part)
        : Error("missing context part: " + part), part_(part) {}
    const std::string& part() const { return part_; }

private:
    std::string part_;
};

class UnvalidatedProperty : public Error {
public:
    explicit UnvalidatedProperty(const std::string& name)
        : Error("property not validated: " + name) {}
};

// --- minicheck ---

class SvaSyntaxError : public Error {
public:
    using Error::Error;
};

class UnsupportedSvaFeature : public Error {
public:
    explicit UnsupportedSvaFeature(const std::string& feature)
        : Error("unsupported SVA feature: " + feature), feature_(feature) {}
    const std::string& feature() const { return feature_; }

private:
    std::string feature_;
};

class DepthExceeded : public Error {
public:
    using Error::Error;
};

class GuardUnsupported : public Error {
public:
    explicit GuardUnsupported(const std::string& expr)
        : Error("guard not expressible over state and free inputs: " + expr) {}
};

// --- driver ---

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace atlas
