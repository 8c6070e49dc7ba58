package com.example.profile;

import android.content.SettingsEditor;
import android.content.SettingsStore;

class ProfileWriter {
  void save(SettingsStore store, String key, String val) {
    SettingsEditor ed = store.openEditor();
    ed.writeString(key, val);
  }
}
