// Frozen responses captured from a live service running the starter
// configuration through the golden explicit-route walkthrough:
// sonya creates a Contract, routes it, tries to Sign too early, then
// Modifies; boyan's Sign bounces off the flow gate; olga signs.
// Regenerate by re-driving that scenario against `gwflow serve`.

export const FIX = {
  "advance_modify": {
    "data": {
      "cursor": 1,
      "doc": 6,
      "doc_status": "Routed",
      "run_status": "Active",
      "visits": 0
    },
    "ok": true,
    "seq": 54
  },
  "doc_created": {
    "data": {
      "digest": "3bfc269594ef649228e9a74bab00f042efc91d5acc6fbee31a382e80d42388fe",
      "handle": 6,
      "index": 5,
      "label": {
        "groups": [],
        "level": 4,
        "secrecy": "Public"
      }
    },
    "ok": true,
    "seq": 52
  },
  "doc_view": {
    "data": {
      "acl": [],
      "class_name": "Contract",
      "content": "v2",
      "doc_class": 3,
      "folder": 4,
      "handle": 6,
      "index": 5,
      "label": {
        "groups": [],
        "level": 4,
        "secrecy": "Public"
      },
      "level": 3,
      "owner": 4,
      "path": "Root/FrontDesk/Vendor deal",
      "run": {
        "cursor": 2,
        "doc": 6,
        "history": [
          {
            "action": "Modify",
            "step": 0,
            "user": 4
          },
          {
            "action": "Sign",
            "step": 1,
            "user": 1
          }
        ],
        "route": 1,
        "route_name": "ContractSigning",
        "status": "Completed",
        "visits": 0
      },
      "signed_by": [
        1
      ],
      "status": "Signed",
      "title": "Vendor deal"
    },
    "ok": true,
    "seq": 55
  },
  "folders_frontdesk": {
    "data": {
      "documents": [
        {
          "acl": [],
          "class_name": "Contract",
          "doc_class": 3,
          "folder": 4,
          "handle": 6,
          "index": 5,
          "label": {
            "groups": [],
            "level": 4,
            "secrecy": "Public"
          },
          "level": 3,
          "owner": 4,
          "path": "Root/FrontDesk/Vendor deal",
          "signed_by": [
            1
          ],
          "status": "Signed",
          "title": "Vendor deal"
        }
      ],
      "folder": {
        "folder": 1,
        "groups": [
          1
        ],
        "handle": 4,
        "index": 4,
        "level": 2,
        "name": "FrontDesk",
        "path": "Root/FrontDesk"
      },
      "folders": []
    },
    "ok": true,
    "seq": 55
  },
  "folders_root": {
    "data": {
      "documents": [],
      "folder": {
        "folder": 0,
        "groups": [],
        "handle": 1,
        "index": 1,
        "level": 1,
        "name": "Root",
        "path": "Root"
      },
      "folders": [
        {
          "folder": 1,
          "groups": [
            1,
            2
          ],
          "handle": 2,
          "index": 2,
          "level": 2,
          "name": "Shared",
          "path": "Root/Shared"
        },
        {
          "folder": 1,
          "groups": [
            1
          ],
          "handle": 4,
          "index": 4,
          "level": 2,
          "name": "FrontDesk",
          "path": "Root/FrontDesk"
        },
        {
          "folder": 1,
          "groups": [
            2
          ],
          "handle": 5,
          "index": 5,
          "level": 2,
          "name": "Ledgers",
          "path": "Root/Ledgers"
        }
      ]
    },
    "ok": true,
    "seq": 51
  },
  "inbox_boyan": {
    "data": [
      {
        "cursor": 1,
        "doc": 6,
        "pending": {
          "action": "Sign",
          "kind": "role",
          "selector": 4
        },
        "route_name": "ContractSigning",
        "title": "Vendor deal"
      }
    ],
    "ok": true,
    "seq": 54
  },
  "inbox_boyan_empty": {
    "data": [],
    "ok": true,
    "seq": 53
  },
  "inbox_sonya": {
    "data": [
      {
        "cursor": 0,
        "doc": 6,
        "pending": {
          "action": "Modify",
          "kind": "role",
          "selector": 7
        },
        "route_name": "ContractSigning",
        "title": "Vendor deal"
      }
    ],
    "ok": true,
    "seq": 53
  },
  "not_found": {
    "body": {
      "detail": "999",
      "error": "UnknownHandle",
      "ok": false
    },
    "status": 404
  },
  "preview_secretary_step": {
    "data": {
      "action": "Modify",
      "cursor": 0,
      "doc": 6,
      "history": [],
      "pending": {
        "action": "Modify",
        "kind": "role",
        "selector": 7
      },
      "route": 1,
      "route_name": "ContractSigning",
      "status": "Active",
      "verdicts": [
        {
          "decision": "Allow",
          "name": "sonya",
          "user": 4
        }
      ],
      "visits": 0
    },
    "ok": true,
    "seq": 53
  },
  "preview_sign_step": {
    "data": {
      "action": "Sign",
      "cursor": 1,
      "doc": 6,
      "history": [
        {
          "action": "Modify",
          "step": 0,
          "user": 4
        }
      ],
      "pending": {
        "action": "Sign",
        "kind": "role",
        "selector": 4
      },
      "route": 1,
      "route_name": "ContractSigning",
      "status": "Active",
      "verdicts": [
        {
          "decision": "Allow",
          "name": "olga",
          "user": 1
        },
        {
          "decision": "Deny:NotInWorkgroup",
          "name": "greg",
          "user": 2
        },
        {
          "decision": "Deny:FlowViolation",
          "name": "boyan",
          "user": 6
        }
      ],
      "visits": 0
    },
    "ok": true,
    "seq": 54
  },
  "route_started": {
    "data": {
      "doc": 6,
      "route": 1,
      "route_name": "ContractSigning",
      "status": "Routed"
    },
    "ok": true,
    "seq": 53
  },
  "sign_committed": {
    "data": {
      "cursor": 2,
      "doc": 6,
      "doc_status": "Signed",
      "run_status": "Completed",
      "visits": 0
    },
    "ok": true,
    "seq": 55
  },
  "sign_denied": {
    "body": {
      "detail": "",
      "error": "AccessDenied",
      "ok": false,
      "reason": "NoSignRight"
    },
    "status": 403
  },
  "sign_flow_denied": {
    "body": {
      "detail": "",
      "error": "AccessDenied",
      "ok": false,
      "reason": "FlowViolation"
    },
    "status": 403
  },
  "trace_done": {
    "data": {
      "candidates": [],
      "cursor": 2,
      "doc": 6,
      "history": [
        {
          "action": "Modify",
          "step": 0,
          "user": 4
        },
        {
          "action": "Sign",
          "step": 1,
          "user": 1
        }
      ],
      "route": 1,
      "route_name": "ContractSigning",
      "status": "Completed",
      "visits": 0
    },
    "ok": true,
    "seq": 55
  },
  "users": {
    "data": [
      {
        "clearance": "Confidential",
        "groups": [
          1,
          2
        ],
        "id": 1,
        "label": {
          "groups": [
            1,
            2
          ],
          "level": 3,
          "secrecy": "Confidential"
        },
        "level": 3,
        "level_name": "Organization",
        "name": "olga",
        "role": 5,
        "role_name": "VP"
      },
      {
        "clearance": "Confidential",
        "groups": [
          2
        ],
        "id": 2,
        "label": {
          "groups": [
            2
          ],
          "level": 5,
          "secrecy": "Confidential"
        },
        "level": 5,
        "level_name": "Accounting",
        "name": "greg",
        "role": 6,
        "role_name": "DeptChief"
      },
      {
        "clearance": "Private",
        "groups": [
          1
        ],
        "id": 3,
        "label": {
          "groups": [
            1
          ],
          "level": 4,
          "secrecy": "Private"
        },
        "level": 4,
        "level_name": "FrontOffice",
        "name": "boris",
        "role": 8,
        "role_name": "Clerk"
      },
      {
        "clearance": "Private",
        "groups": [
          1
        ],
        "id": 4,
        "label": {
          "groups": [
            1
          ],
          "level": 4,
          "secrecy": "Private"
        },
        "level": 4,
        "level_name": "FrontOffice",
        "name": "sonya",
        "role": 7,
        "role_name": "Secretary"
      },
      {
        "clearance": "Private",
        "groups": [
          2
        ],
        "id": 5,
        "label": {
          "groups": [
            2
          ],
          "level": 5,
          "secrecy": "Private"
        },
        "level": 5,
        "level_name": "Accounting",
        "name": "vera",
        "role": 8,
        "role_name": "Clerk"
      },
      {
        "clearance": "Public",
        "groups": [
          1
        ],
        "id": 6,
        "label": {
          "groups": [
            1
          ],
          "level": 6,
          "secrecy": "Public"
        },
        "level": 6,
        "level_name": "Reception",
        "name": "boyan",
        "role": 4,
        "role_name": "Boss"
      },
      {
        "clearance": "Confidential",
        "groups": [],
        "id": 7,
        "label": {
          "groups": [],
          "level": 3,
          "secrecy": "Confidential"
        },
        "level": 3,
        "level_name": "Organization",
        "name": "xadm",
        "role": 11,
        "role_name": "System_adm"
      },
      {
        "clearance": "Confidential",
        "groups": [],
        "id": 8,
        "label": {
          "groups": [],
          "level": 3,
          "secrecy": "Confidential"
        },
        "level": 3,
        "level_name": "Organization",
        "name": "sadm",
        "role": 10,
        "role_name": "Security_adm"
      },
      {
        "clearance": "Public",
        "groups": [],
        "id": 9,
        "label": {
          "groups": [],
          "level": 4,
          "secrecy": "Public"
        },
        "level": 4,
        "level_name": "FrontOffice",
        "name": "guestg",
        "role": 12,
        "role_name": "Guest"
      }
    ],
    "ok": true,
    "seq": 51
  }
} as const;
