/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "jmeas/circuit.hpp"
#include "jmeas/estimator.hpp"
#include "jmeas/experiments.hpp"
#include "jmeas/graph.hpp"
#include "jmeas/grouping.hpp"
#include "jmeas/measurements.hpp"
#include "jmeas/observable.hpp"
#include "jmeas/pauli.hpp"
#include "jmeas/sim.hpp"
#include "jmeas/version.hpp"
#include "jmeas/vqe.hpp"
